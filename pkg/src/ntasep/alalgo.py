"""Two-line graphical construction of the conjugation matrices.

Given a line of black/white boxes and a lower configuration with species
``1..N``, species ``1..N-1`` are dropped onto black boxes by a leftward queue
rule, the unused black boxes take ``N`` and the white boxes take ``N+1``.
Each white box contributes ``y_l`` with ``l`` the smallest arrow value
crossing the vertical line on its left, or ``y_N`` if none does.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .lattice import Arrow, Sector, enumerate_sector, merge_last, sector_of
from .matrix import SparsePolyMatrix
from .mpa import stationary_from
from .ring import LaurentPoly, Monomial


def parse_boxes(text: str) -> tuple:
    """``"BBWB"`` -> ``(True, True, False, True)``; True marks a black box."""
    text = text.strip().upper()
    if not text or any(ch not in "BW" for ch in text):
        raise ValueError(f"box line {text!r} must be a string over B/W")
    return tuple(ch == "B" for ch in text)


def format_boxes(boxes: Sequence[bool]) -> str:
    return "".join("B" if b else "W" for b in boxes)


@dataclass(frozen=True)
class ALResult:
    upper: tuple
    arrows: tuple
    weight: Monomial

    def weight_poly(self) -> LaurentPoly:
        return LaurentPoly.monomial(self.weight)


def al_construct(boxes: Sequence[bool], k: Sequence[int], N: int | None = None,
                 descending: bool = False) -> ALResult:
    """Upper configuration, arrow diagram and weight for box line ``boxes`` over ``k``.

    ``N`` defaults to the largest letter of ``k``.  Occurrences of each species
    are processed by ascending position; ``descending=True`` reverses that,
    which is only used to probe order dependence.
    """
    if isinstance(boxes, str):
        boxes = parse_boxes(boxes)
    boxes, k = tuple(boxes), tuple(k)
    L = len(k)
    if len(boxes) != L:
        raise ValueError("box line and word must have equal length")
    N = max(k) if N is None else N
    counts = sector_of(k, N)
    if not all(counts):
        raise ValueError(f"lower word {k} is not in a basic sector")
    whites = L - sum(boxes)
    if whites < 1 or counts[-1] - whites < 1:
        raise ValueError(
            f"{whites} white boxes do not fit a basic sector over lower counts {counts}")

    upper = [0] * L
    arrows = []
    for nu in range(1, N):
        sites = [i for i in range(L) if k[i] == nu]
        if descending:
            sites.reverse()
        for p in sites:
            q = next((q for q in range(p, -1, -1) if boxes[q] and not upper[q]), None)
            if q is None:
                q = next(q for q in range(L - 1, -1, -1) if boxes[q] and not upper[q])
            upper[q] = nu
            arrows.append(Arrow(p + 1, q + 1, nu))
    for i in range(L):
        if not upper[i]:
            upper[i] = N if boxes[i] else N + 1

    exps = [0] * N
    for i in range(L):
        if boxes[i]:
            continue
        vals = [a.value for a in arrows if a.crosses(i + 1, L)]
        exps[(min(vals) if vals else N) - 1] += 1
    return ALResult(tuple(upper), tuple(arrows), tuple(exps))


def box_lines(L: int, whites: int):
    """All box lines of length ``L`` with ``whites`` white boxes."""
    for ws in combinations(range(L), whites):
        line = [True] * L
        for w in ws:
            line[w] = False
        yield tuple(line)


def psi_al(m: Sector) -> SparsePolyMatrix:
    """Conjugation matrix assembled from the graphical construction."""
    N = m.nspecies
    if N < 1:
        raise ValueError("conjugation matrices need at least two species labels")
    rows = enumerate_sector(m)
    cols = enumerate_sector(merge_last(m))
    row_pos = {w: i for i, w in enumerate(rows)}
    psi = SparsePolyMatrix(rows, cols, N)
    lines = list(box_lines(m.length, m.counts[-1]))
    for c, k in enumerate(cols):
        for line in lines:
            res = al_construct(line, k, N)
            key = row_pos[res.upper], c
            if key in psi.entries:
                raise AssertionError(f"two box lines map {k} to {res.upper}")
            psi.entries[key] = LaurentPoly.monomial(res.weight)
    return psi


def stationary_al(m: Sector) -> list[LaurentPoly]:
    """Unnormalized stationary weights over ``enumerate_sector(m)`` from the construction."""
    return stationary_from(m, psi_al)
