"""Sparse matrices over :class:`LaurentPoly` indexed by configurations."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Sequence

from .lattice import format_word
from .ring import LaurentPoly, poly_sum


class SparsePolyMatrix:
    """Sparse matrix whose rows and columns are labelled by configurations.

    ``entries`` maps ``(row_index, col_index)`` to a nonzero polynomial; missing
    keys are exactly zero.
    """

    def __init__(self, rows: Sequence, cols: Sequence, nvars: int, entries=None):
        self.rows = list(rows)
        self.cols = list(cols)
        self.nvars = nvars
        self.entries: dict = {}
        self._row_pos = None
        self._col_pos = None
        for (r, c), p in (entries or {}).items():
            if p.nvars != nvars:
                raise ValueError("entry has the wrong variable count")
            if p:
                self.entries[r, c] = p

    @property
    def shape(self):
        return len(self.rows), len(self.cols)

    def row_index(self, label) -> int:
        if self._row_pos is None:
            self._row_pos = {w: i for i, w in enumerate(self.rows)}
        return self._row_pos[label]

    def col_index(self, label) -> int:
        if self._col_pos is None:
            self._col_pos = {w: i for i, w in enumerate(self.cols)}
        return self._col_pos[label]

    def __getitem__(self, key) -> LaurentPoly:
        r, c = key
        if not isinstance(r, int):
            r = self.row_index(r)
        if not isinstance(c, int):
            c = self.col_index(c)
        return self.entries.get((r, c), LaurentPoly.zero(self.nvars))

    def add_to(self, r: int, c: int, p: LaurentPoly) -> None:
        s = self.entries.get((r, c))
        s = p if s is None else s + p
        if s:
            self.entries[r, c] = s
        else:
            self.entries.pop((r, c), None)

    def __eq__(self, other):
        if not isinstance(other, SparsePolyMatrix):
            return NotImplemented
        return (self.rows == other.rows and self.cols == other.cols
                and self.nvars == other.nvars and self.entries == other.entries)

    def nnz(self) -> int:
        return len(self.entries)

    def lift(self, nvars: int) -> SparsePolyMatrix:
        return SparsePolyMatrix(self.rows, self.cols, nvars,
                                {k: p.lift(nvars) for k, p in self.entries.items()})

    def copy(self) -> SparsePolyMatrix:
        return SparsePolyMatrix(self.rows, self.cols, self.nvars, dict(self.entries))

    def to_dense(self) -> list[list[LaurentPoly]]:
        z = LaurentPoly.zero(self.nvars)
        out = [[z] * len(self.cols) for _ in self.rows]
        for (r, c), p in self.entries.items():
            out[r][c] = p
        return out

    def apply(self, vec: Sequence[LaurentPoly]) -> list[LaurentPoly]:
        """Exact product ``self @ vec``."""
        if len(vec) != len(self.cols):
            raise ValueError(f"dimension mismatch: {len(self.cols)} columns, vector of {len(vec)}")
        buckets: list[list] = [[] for _ in self.rows]
        for (r, c), p in self.entries.items():
            v = vec[c]
            if v:
                buckets[r].append(p * v)
        return [poly_sum(b, self.nvars) for b in buckets]

    def matmul(self, other: SparsePolyMatrix) -> SparsePolyMatrix:
        if len(self.cols) != len(other.rows):
            raise ValueError("dimension mismatch")
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")
        by_row: dict = {}
        for (r, c), p in other.entries.items():
            by_row.setdefault(r, []).append((c, p))
        acc: dict = {}
        for (r, k), p in self.entries.items():
            for c, q in by_row.get(k, ()):
                acc.setdefault((r, c), []).append(p * q)
        entries = {}
        for key, parts in acc.items():
            s = poly_sum(parts, self.nvars)
            if s:
                entries[key] = s
        return SparsePolyMatrix(self.rows, other.cols, self.nvars, entries)

    def evaluate(self, values: Sequence) -> dict:
        """Entries evaluated at ``y = values``, as a sparse ``{(r, c): Fraction}`` map."""
        return {k: p.evaluate(values) for k, p in self.entries.items()}

    # -- export -----------------------------------------------------------

    def to_json_obj(self) -> dict:
        return {
            "rows": [format_word(w) for w in self.rows],
            "cols": [format_word(w) for w in self.cols],
            "entries": [[r, c, str(self.entries[r, c])] for r, c in sorted(self.entries)],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    def to_tsv(self) -> str:
        lines = [f"{format_word(self.rows[r])}\t{format_word(self.cols[c])}\t{self.entries[r, c]}"
                 for r, c in sorted(self.entries)]
        return "\n".join(lines) + ("\n" if lines else "")


def fraction_matrix_apply(entries: dict, n_rows: int, vec: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * n_rows
    for (r, c), v in entries.items():
        if vec[c]:
            out[r] += v * vec[c]
    return out
