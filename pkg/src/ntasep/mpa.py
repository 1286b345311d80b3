"""Matrix-product engine: operator entries on Fock states, traces, conjugation matrices.

The auxiliary space of level N is spanned by ``|mu_1, ..., mu_{N-1}>>`` with
``mu_nu`` read as the number of value-``nu`` arrows crossing a vertical line.
Operator entries are never stored as matrices; each one is a rule that maps a
basis state to a single monomial times a basis state, or annihilates it.
Words are applied right to left, ``a_{j_L k_L}`` first.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .lattice import Sector, enumerate_sector, merge_last, sector_of
from .matrix import SparsePolyMatrix
from .ring import LaurentPoly, Monomial, unit

FockState = tuple  # (mu_1, ..., mu_{N-1})

# An entry action is either None (the state is annihilated) or a pair
# (coefficient monomial, next state).
EntryAction = "tuple[Monomial, FockState] | None"


def _check_indices(N, j, k, mu):
    if N < 1:
        raise IndexError("level N must be at least 1")
    if not 1 <= j <= N + 1:
        raise IndexError(f"row index j={j} outside 1..{N + 1}")
    if not 1 <= k <= N:
        raise IndexError(f"column index k={k} outside 1..{N}")
    if len(mu) != N - 1:
        raise ValueError(f"Fock state {mu} should have {N - 1} components")


def _first_nonzero(mu) -> int | None:
    for i, v in enumerate(mu, start=1):
        if v:
            return i
    return None


def apply_entry(N: int, j: int, k: int, mu: Sequence[int]):
    """Act with ``a^(N)_{jk}`` on ``|mu>>``.

    Rows ``j <= N`` carry no rate: ``j < k`` moves one unit from ``mu_j`` to
    ``mu_k`` (or just removes it when ``k = N``), ``j = k`` is a projector and
    ``j > k`` vanishes.  In each case ``mu_1 .. mu_{j-1}`` must be zero.  Row
    ``j = N+1`` multiplies by ``y_{min(l, k)}``, with ``l`` the first nonzero
    component (taken as infinite for the empty state), and raises ``mu_k``
    when ``k < N``.
    """
    _check_indices(N, j, k, mu)
    mu = tuple(mu)
    if j <= N:
        if j > k or any(mu[:j - 1]):
            return None
        if j == k:
            return (0,) * N, mu
        if mu[j - 1] == 0:
            return None
        nxt = list(mu)
        nxt[j - 1] -= 1
        if k < N:
            nxt[k - 1] += 1
        return (0,) * N, tuple(nxt)
    ell = _first_nonzero(mu)
    idx = k if ell is None else min(ell, k)
    if k < N:
        nxt = list(mu)
        nxt[k - 1] += 1
        return unit(N, idx), tuple(nxt)
    return unit(N, idx), mu


def apply_hat_entry(N: int, j: int, k: int, mu: Sequence[int]):
    """Act with ``\\hat a^(N)_{jk}``: zero except on the last row, which raises ``mu_k`` (k < N)."""
    _check_indices(N, j, k, mu)
    mu = tuple(mu)
    if j <= N:
        return None
    if k < N:
        nxt = list(mu)
        nxt[k - 1] += 1
        return (0,) * N, tuple(nxt)
    return (0,) * N, mu


@dataclass(frozen=True)
class Trajectory:
    """A closed trajectory of a word product.

    ``states[i]`` is the Fock state on the vertical line left of site ``i+1``
    (``states[L]`` equals ``states[0]``, the fixed state), and ``coef`` is the
    eigenvalue monomial.
    """

    states: tuple
    coef: Monomial

    @property
    def fixed_state(self) -> FockState:
        return self.states[0]


def _run(N, j, k, start, positions):
    """Apply the entries at ``positions`` (in the given order) to ``start``."""
    exps = [0] * N
    mu = start
    states = {}
    for i in positions:
        res = apply_entry(N, j[i], k[i], mu)
        if res is None:
            return None
        e, mu = res
        for a, v in enumerate(e):
            exps[a] += v
        states[i] = mu
    return tuple(exps), mu, states


def _sectors_match(N, j, k) -> bool:
    if len(j) != len(k):
        raise ValueError("words must have equal length")
    if any(not 1 <= s <= N + 1 for s in j) or any(not 1 <= s <= N for s in k):
        return False
    mj = sector_of(j, N + 1)
    mk = sector_of(k, N)
    if not all(mj) or not all(mk):
        return False
    return mk == mj[:-2] + (mj[-2] + mj[-1],)


def trajectory(N: int, j: Sequence[int], k: Sequence[int]) -> Trajectory | None:
    """The unique closed trajectory of ``a_{j_1 k_1} ... a_{j_L k_L}``, or None.

    In a basic sector some site carries ``j_p = N``; the only nonvanishing entry
    there is ``a_{NN}``, the projector on the empty state.  Cycling the trace
    so that this site acts last pins the state on its right to the vacuum, and
    the remaining sites are applied cyclically leftwards from there.
    """
    j, k = tuple(j), tuple(k)
    if not _sectors_match(N, j, k):
        return None
    L = len(j)
    p = j.index(N)
    # positions p, p-1, ..., 0, L-1, ..., p+1 (0-based), i.e. right to left cyclically
    positions = [(p - s) % L for s in range(L)]
    vac = (0,) * (N - 1)
    run = _run(N, j, k, vac, positions)
    if run is None:
        return None
    exps, end, states = run
    if end != vac:
        return None
    # state left of site i (0-based) is states[i]; the line left of site 1 is states[0]
    ordered = tuple(states[i] for i in range(L)) + (states[0],)
    return Trajectory(ordered, exps)


def fixed_points(N: int, j: Sequence[int], k: Sequence[int], bound: int | None = None,
                 first_only: bool = False) -> list[tuple[FockState, Monomial]]:
    """Exhaustive search for states returned to themselves by the word product.

    Candidates range over ``[0, bound]^(N-1)`` with ``bound`` defaulting to L.
    """
    j, k = tuple(j), tuple(k)
    if len(j) != len(k):
        raise ValueError("words must have equal length")
    L = len(j)
    bound = L if bound is None else bound
    positions = list(range(L - 1, -1, -1))
    found = []
    for mu in product(range(bound + 1), repeat=N - 1):
        run = _run(N, j, k, mu, positions)
        if run is not None and run[1] == mu:
            found.append((mu, run[0]))
            if first_only:
                break
    return found


def trace_word(N: int, j: Sequence[int], k: Sequence[int], method: str = "vacuum") -> LaurentPoly:
    """``Tr(a_{j_1 k_1} ... a_{j_L k_L})`` as a monomial, or zero.

    ``method="vacuum"`` uses :func:`trajectory`; ``method="search"`` scans all
    candidate states and keeps the first fixed point.
    """
    if method == "vacuum":
        t = trajectory(N, j, k)
        return LaurentPoly.zero(N) if t is None else LaurentPoly.monomial(t.coef)
    if method == "search":
        if not _sectors_match(N, tuple(j), tuple(k)):
            return LaurentPoly.zero(N)
        hits = fixed_points(N, j, k, first_only=True)
        return LaurentPoly.monomial(hits[0][1]) if hits else LaurentPoly.zero(N)
    raise ValueError(f"unknown trace method {method!r}")


def _candidate_rows(N, k, counts):
    """Words ``j`` in sector ``counts`` with ``a_{j_i k_i}`` nonzero site by site."""
    L = len(k)
    remaining = list(counts)
    word = [0] * L

    def rec(i):
        if i == L:
            yield tuple(word)
            return
        for s in range(1, N + 2):
            if remaining[s - 1] and (s <= k[i] or s == N + 1):
                remaining[s - 1] -= 1
                word[i] = s
                yield from rec(i + 1)
                remaining[s - 1] += 1

    yield from rec(0)


def conjugation_matrix(m: Sector, method: str = "vacuum") -> SparsePolyMatrix:
    """``psi_m``: rows over sector ``m``, columns over ``merge_last(m)``, entries are traces."""
    N = m.nspecies
    if N < 1:
        raise ValueError("conjugation matrices need at least two species labels")
    rows = enumerate_sector(m)
    cols = enumerate_sector(merge_last(m))
    psi = SparsePolyMatrix(rows, cols, N)
    row_pos = {w: i for i, w in enumerate(rows)}
    for c, k in enumerate(cols):
        for j in _candidate_rows(N, k, m.counts):
            t = trace_word(N, j, k, method)
            if t:
                psi.entries[row_pos[j], c] = t
    return psi


def level_sectors(m: Sector) -> list[Sector]:
    """``[m, m', m'', ..., (L,)]``, merging the last two parts at each step."""
    out = [m]
    while len(out[-1].counts) > 1:
        out.append(merge_last(out[-1]))
    return out


def stationary_from(m: Sector, psi_for) -> list[LaurentPoly]:
    """Fold ``psi_m psi_m' ... psi_(m1, L-m1)`` onto the single configuration of ``(L,)``."""
    levels = level_sectors(m)
    vec = [LaurentPoly.one(0)]
    for s in reversed(levels[:-1]):
        psi = psi_for(s)
        vec = psi.apply([v.lift(psi.nvars) for v in vec])
    return vec


def stationary_mpa(m: Sector) -> list[LaurentPoly]:
    """Unnormalized stationary weights over ``enumerate_sector(m)`` from traces."""
    return stationary_from(m, conjugation_matrix)
