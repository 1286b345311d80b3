"""Sector-restricted Markov generators and exact kernel solving.

Convention: ``d|P>/dt = M |P>`` with ``M[w', w]`` the rate of ``w -> w'``, so
each *column* of a generator sums to zero and the stationary state is a right
null vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .lattice import Sector, enumerate_sector
from .matrix import SparsePolyMatrix
from .ring import LaurentPoly, unit

DEFAULT_CHARPOLY_CAP = 40


class KernelError(ArithmeticError):
    """The null space is not one-dimensional."""


@dataclass(frozen=True)
class RateAssignment:
    """Positive exact hopping rates ``x_1..x_N``."""

    x: tuple

    def __post_init__(self):
        vals = tuple(Fraction(v) for v in self.x)
        if any(v <= 0 for v in vals):
            raise ValueError("hopping rates must be strictly positive")
        object.__setattr__(self, "x", vals)

    @classmethod
    def parse(cls, text: str) -> RateAssignment:
        try:
            vals = [Fraction(t.strip()) for t in text.split(",")]
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"malformed rates {text!r}") from None
        if any("." in t or "e" in t.lower() for t in text.split(",")):
            raise ValueError("rates must be exact integers or fractions like 1/3")
        return cls(tuple(vals))

    @classmethod
    def from_y(cls, y: Sequence) -> RateAssignment:
        return cls(tuple(1 / Fraction(v) for v in y))

    @classmethod
    def homogeneous(cls, n: int) -> RateAssignment:
        return cls((1,) * n)

    @property
    def y(self) -> tuple:
        return tuple(1 / v for v in self.x)

    def restrict(self, n: int) -> RateAssignment:
        if n > len(self.x):
            raise ValueError(f"need {n} rates, have {len(self.x)}")
        return RateAssignment(self.x[:n])

    def __str__(self):
        return ",".join(str(v) for v in self.x)


def _transitions(word):
    """Yield ``(target, species)`` for each allowed hop out of ``word``."""
    L = len(word)
    for i in range(L):
        a, b = word[i], word[(i + 1) % L]
        if a < b:
            t = list(word)
            t[i], t[(i + 1) % L] = b, a
            yield tuple(t), a


def build_generator(m: Sector) -> SparsePolyMatrix:
    """Symbolic generator ``M_m`` with off-diagonal entries ``x_a = y_a^-1``."""
    n = m.nspecies
    configs = enumerate_sector(m)
    pos = {w: i for i, w in enumerate(configs)}
    M = SparsePolyMatrix(configs, configs, n)
    for c, w in enumerate(configs):
        for target, a in _transitions(w):
            rate = LaurentPoly.monomial(unit(n, a, -1))
            M.add_to(pos[target], c, rate)
            M.add_to(c, c, -rate)
    return M


def generator_at(m: Sector, rates: RateAssignment) -> dict:
    """``M_m`` at fixed rates as a sparse ``{(row, col): Fraction}`` map."""
    x = rates.restrict(m.nspecies).x
    configs = enumerate_sector(m)
    pos = {w: i for i, w in enumerate(configs)}
    out: dict = {}
    for c, w in enumerate(configs):
        for target, a in _transitions(w):
            r = pos[target]
            out[r, c] = out.get((r, c), 0) + x[a - 1]
            out[c, c] = out.get((c, c), 0) - x[a - 1]
    return {k: v for k, v in out.items() if v}


def apply(M: SparsePolyMatrix, vec: Sequence[LaurentPoly]) -> list[LaurentPoly]:
    return M.apply(vec)


def column_sums(M: SparsePolyMatrix) -> list[LaurentPoly]:
    sums = [LaurentPoly.zero(M.nvars) for _ in M.cols]
    for (_, c), p in M.entries.items():
        sums[c] = sums[c] + p
    return sums


# -- exact null space ------------------------------------------------------

def _integer_row(row: dict) -> dict:
    den = 1
    for v in row.values():
        den = den * v.denominator // gcd(den, v.denominator)
    return _primitive({c: int(v * den) for c, v in row.items() if v})


def _primitive(row: dict) -> dict:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {c: v // g for c, v in row.items()}
    return row


def eliminate(entries: dict) -> list[tuple[int, dict]]:
    """Fraction-free sparse Gaussian elimination with Markowitz-style pivoting.

    ``entries`` is a sparse rational matrix ``{(row, col): value}``.  Returns the
    pivot sequence ``[(col, row), ...]``: each integer row holds its pivot column
    plus columns that are pivoted later or never.  Updates are
    cross-multiplications followed by removal of the row content, so no
    fractions are formed.  The pivot at each step is taken in the shortest
    remaining column, breaking ties by the shortest row.
    """
    raw: dict = {}
    for (r, c), v in entries.items():
        if v:
            raw.setdefault(r, {})[c] = Fraction(v)
    rows = {r: _integer_row(row) for r, row in raw.items()}
    cols: dict = {}
    for r, row in rows.items():
        for c in row:
            cols.setdefault(c, set()).add(r)

    order = []
    while cols:
        c = min(cols, key=lambda k: (len(cols[k]), k))
        r = min(cols[c], key=lambda k: (len(rows[k]), k))
        prow = rows.pop(r)
        for k in prow:
            cols[k].discard(r)
        order.append((c, prow))
        b = prow[c]
        for r2 in list(cols[c]):
            row = rows[r2]
            a = row[c]
            g = gcd(a, b)
            fa, fb = b // g, a // g
            new = {k: fa * v for k, v in row.items()} if fa != 1 else dict(row)
            for k, v in prow.items():
                s = new.get(k, 0) - fb * v
                if s:
                    new[k] = s
                else:
                    new.pop(k, None)
            new = _primitive(new)
            for k in row.keys() - new.keys():
                cols[k].discard(r2)
            for k in new.keys() - row.keys():
                cols.setdefault(k, set()).add(r2)
            if new:
                rows[r2] = new
            else:
                del rows[r2]
        for k in [k for k, rs in cols.items() if not rs]:
            del cols[k]
    return order


def null_space(entries: dict, n_rows: int, n_cols: int) -> list[list[Fraction]]:
    """Basis of the right null space of a sparse rational matrix."""
    if any(not (0 <= r < n_rows and 0 <= c < n_cols) for r, c in entries):
        raise ValueError("entry index out of range")
    order = eliminate(entries)
    pivoted = {c for c, _ in order}
    free = [c for c in range(n_cols) if c not in pivoted]
    basis = []
    for f in free:
        v = [Fraction(0)] * n_cols
        v[f] = Fraction(1)
        for c, row in reversed(order):
            s = sum(coef * v[k] for k, coef in row.items() if k != c)
            v[c] = -Fraction(s) / row[c]
        basis.append(v)
    return basis


def kernel_solve(entries: dict, n: int) -> list[Fraction]:
    """Normalized positive kernel vector of an ``n x n`` generator at fixed rates.

    Raises :class:`KernelError` unless the null space is exactly one-dimensional
    with entries of a single sign.
    """
    basis = null_space(entries, n, n)
    if len(basis) != 1:
        raise KernelError(f"null space has dimension {len(basis)}, expected 1")
    v = basis[0]
    total = sum(v)
    if total == 0:
        raise KernelError("kernel vector sums to zero")
    v = [t / total for t in v]
    if any(t <= 0 for t in v):
        raise KernelError("kernel vector is not strictly positive")
    return v


def stationary_kernel(m: Sector, rates: RateAssignment) -> list[Fraction]:
    """Stationary distribution of ``M_m`` at ``rates``, by direct null-space solving."""
    return kernel_solve(generator_at(m, rates), m.size())


# -- characteristic polynomials -------------------------------------------

def charpoly(dense: Sequence[Sequence]) -> list[Fraction]:
    """Coefficients (constant term first) of ``det(t*I - A)`` over the rationals.

    Reduces to upper Hessenberg form by rational similarity transforms, then
    runs the usual Hessenberg determinant recurrence.
    """
    n = len(dense)
    H = [[Fraction(v) for v in row] for row in dense]
    for m in range(1, n - 1):
        i = next((i for i in range(m, n) if H[i][m - 1] != 0), None)
        if i is None:
            continue
        if i != m:
            H[i], H[m] = H[m], H[i]
            for row in H:
                row[i], row[m] = row[m], row[i]
        t = H[m][m - 1]
        for i in range(m + 1, n):
            u = H[i][m - 1] / t
            if u:
                Hi, Hm = H[i], H[m]
                for j in range(n):
                    if Hm[j]:
                        Hi[j] -= u * Hm[j]
                for row in H:
                    if row[i]:
                        row[m] += u * row[i]
    polys = [[Fraction(1)]]
    for m in range(n):
        # (t - h_mm) * p_m
        prev = polys[m]
        nxt = [Fraction(0)] + prev
        for k, c in enumerate(prev):
            nxt[k] -= H[m][m] * c
        prod = Fraction(1)
        for i in range(m - 1, -1, -1):
            prod *= H[i + 1][i]
            if not prod:
                break
            coef = H[i][m] * prod
            if coef:
                for k, c in enumerate(polys[i]):
                    nxt[k] -= coef * c
        polys.append(nxt)
    return polys[n]


def poly_divmod(num: Sequence, den: Sequence) -> tuple[list[Fraction], list[Fraction]]:
    """Long division of univariate rational polynomials (constant term first)."""
    num = [Fraction(c) for c in num]
    den = [Fraction(c) for c in den]
    while den and den[-1] == 0:
        den.pop()
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(num)
    q = [Fraction(0)] * max(len(num) - len(den) + 1, 1)
    lead = den[-1]
    for shift in range(len(num) - len(den), -1, -1):
        c = rem[shift + len(den) - 1] / lead
        q[shift] = c
        if c:
            for k, d in enumerate(den):
                rem[shift + k] -= c * d
    rem = rem[:len(den) - 1]
    while rem and rem[-1] == 0:
        rem.pop()
    return q, rem


def dense_from_entries(entries: dict, n: int) -> list[list[Fraction]]:
    out = [[Fraction(0)] * n for _ in range(n)]
    for (r, c), v in entries.items():
        out[r][c] = Fraction(v)
    return out


def charpoly_of_sector(m: Sector, rates: RateAssignment,
                       cap: int = DEFAULT_CHARPOLY_CAP) -> list[Fraction]:
    from .lattice import CapExceeded

    n = m.size()
    if n > cap:
        raise CapExceeded(f"dim(M_m)={n} exceeds the char-poly cap {cap}")
    return charpoly(dense_from_entries(generator_at(m, rates), n))
