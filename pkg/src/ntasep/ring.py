"""Exact Laurent polynomials in y1..yN with integer coefficients.

A polynomial is a map from exponent tuples (length ``nvars``, entries may be
negative) to nonzero Python ints.  Hopping rates enter as ``x_a = y_a^-1`` so
every generator entry and every stationary weight lives in the same ring.

Text form (used by the CLI and the JSON/TSV exports)::

    poly   := ["-"] term (("+" | "-") term)*
    term   := factor ("*" factor)*
    factor := INT | "y" INT ["^" ["-"] INT]

Unit coefficients and unit exponents are omitted when printing, terms are
printed in graded-lex order (higher total degree first, then lexicographically
larger exponent vectors first), and the zero polynomial prints as ``0``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Monomial = tuple  # exponent vector, one entry per variable


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def unit(nvars: int, index: int, power: int = 1) -> Monomial:
    """Exponent vector of ``y_index ** power`` (1-based index)."""
    e = [0] * nvars
    e[index - 1] = power
    return tuple(e)


def _grlex_key(exps):
    return (-sum(exps), tuple(-e for e in exps))


class LaurentPoly:
    """Immutable Laurent polynomial with integer coefficients."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Monomial, int] | None = None):
        if nvars < 0:
            raise ValueError("nvars must be nonnegative")
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != nvars:
                raise ValueError(f"monomial {exps} does not have {nvars} exponents")
            c = int(c)
            if c:
                clean[exps] = clean.get(exps, 0) + c
                if not clean[exps]:
                    del clean[exps]
        self.nvars = nvars
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars, terms):
        # caller guarantees canonical form
        p = object.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, nvars: int) -> LaurentPoly:
        return cls._raw(nvars, {})

    @classmethod
    def const(cls, nvars: int, c: int = 1) -> LaurentPoly:
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def one(cls, nvars: int) -> LaurentPoly:
        return cls.const(nvars, 1)

    @classmethod
    def monomial(cls, exps: Sequence[int], coef: int = 1) -> LaurentPoly:
        exps = tuple(exps)
        return cls._raw(len(exps), {exps: coef} if coef else {})

    @classmethod
    def y(cls, nvars: int, index: int, power: int = 1) -> LaurentPoly:
        """The variable ``y_index`` raised to ``power``."""
        if not 1 <= index <= nvars:
            raise ValueError(f"variable index {index} out of range 1..{nvars}")
        return cls._raw(nvars, {unit(nvars, index, power): 1})

    @classmethod
    def x(cls, nvars: int, index: int) -> LaurentPoly:
        """The hopping rate ``x_index = y_index^-1``."""
        return cls.y(nvars, index, -1)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            if other.nvars != self.nvars:
                raise ValueError(
                    f"variable count mismatch: {self.nvars} vs {other.nvars}")
            return other
        if isinstance(other, int):
            return LaurentPoly.const(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if len(other.terms) > len(self.terms):
            big, small = other.terms, self.terms
        else:
            big, small = self.terms, other.terms
        out = dict(big)
        for e, c in small.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                del out[e]
        return LaurentPoly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    del out[e]
        return LaurentPoly._raw(self.nvars, out)

    __rmul__ = __mul__

    def mul_monomial(self, exps: Monomial, coef: int = 1) -> LaurentPoly:
        """Multiply by ``coef * y^exps`` without going through the general product."""
        if len(exps) != self.nvars:
            raise ValueError("variable count mismatch")
        if not coef:
            return LaurentPoly.zero(self.nvars)
        return LaurentPoly._raw(self.nvars, {
            tuple(a + b for a, b in zip(e, exps)): c * coef
            for e, c in self.terms.items()})

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if not self.is_monomial() or abs(next(iter(self.terms.values()))) != 1:
                raise ValueError("only unit monomials have Laurent inverses")
            (e, c), = self.terms.items()
            return LaurentPoly._raw(self.nvars, {tuple(n * a for a in e): c ** (-n)})
        out = LaurentPoly.one(self.nvars)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(self.nvars, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- inspection -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]))

    def coefficients(self) -> list[int]:
        return [c for _, c in self.sorted_terms()]

    def lift(self, nvars: int) -> LaurentPoly:
        """Embed into a ring with more variables (new exponents are zero)."""
        if nvars < self.nvars:
            raise ValueError("cannot lift to fewer variables")
        if nvars == self.nvars:
            return self
        pad = (0,) * (nvars - self.nvars)
        return LaurentPoly._raw(nvars, {e + pad: c for e, c in self.terms.items()})

    def substitute_ones(self) -> int:
        """Value at y = (1, ..., 1)."""
        return sum(self.terms.values())

    def evaluate(self, values: Sequence) -> Fraction:
        """Exact value at ``y_a = values[a-1]``.

        Raises ValueError if a zero value meets a negative exponent.
        """
        if len(values) != self.nvars:
            raise ValueError(f"expected {self.nvars} values, got {len(values)}")
        vals = [Fraction(v) for v in values]
        total = Fraction(0)
        for e, c in self.terms.items():
            t = Fraction(c)
            for v, k in zip(vals, e):
                if k < 0 and v == 0:
                    raise ValueError("zero rate with a negative exponent")
                if k:
                    t *= v ** k
            total += t
        return total

    # -- text -------------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for i, (e, c) in enumerate(self.sorted_terms()):
            factors = []
            for a, k in enumerate(e, start=1):
                if k == 1:
                    factors.append(f"y{a}")
                elif k:
                    factors.append(f"y{a}^{k}")
            mag = abs(c)
            if mag != 1 or not factors:
                factors.insert(0, str(mag))
            body = "*".join(factors)
            if i == 0:
                pieces.append(("-" if c < 0 else "") + body)
            else:
                pieces.append((" - " if c < 0 else " + ") + body)
        return "".join(pieces)

    def __repr__(self):
        return f"LaurentPoly({self.nvars}, {str(self)!r})"


_TOKEN = re.compile(r"\s*(?:(\d+)|y(\d+)(?:\^(-?\d+))?|([+\-*]))")


def parse_poly(text: str, nvars: int | None = None) -> LaurentPoly:
    """Parse the text form; ``nvars`` defaults to the largest variable index seen."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial {text!r} at offset {pos}")
        tokens.append(m.groups())
        pos = m.end()
    if not tokens:
        raise ValueError("empty polynomial")

    terms: list[tuple[int, dict[int, int]]] = []
    sign = 1
    coef, powers, expect_factor = 1, {}, True
    for i, (num, var, power, op) in enumerate(tokens):
        if i == 0 and op in ("+", "-"):
            sign = -1 if op == "-" else 1
            continue
        if op == "*":
            if expect_factor:
                raise ValueError(f"dangling '*' in {text!r}")
            expect_factor = True
            continue
        if op in ("+", "-"):
            if expect_factor:
                raise ValueError(f"misplaced {op!r} in {text!r}")
            terms.append((sign * coef, powers))
            sign = -1 if op == "-" else 1
            coef, powers, expect_factor = 1, {}, True
            continue
        if not expect_factor:
            raise ValueError(f"missing operator in {text!r}")
        if num is not None:
            coef *= int(num)
        else:
            idx = int(var)
            if idx < 1:
                raise ValueError("variables are numbered from 1")
            powers[idx] = powers.get(idx, 0) + (int(power) if power is not None else 1)
        expect_factor = False
    if expect_factor:
        raise ValueError(f"incomplete polynomial {text!r}")
    terms.append((sign * coef, powers))

    seen = max((i for _, p in terms for i in p), default=0)
    if nvars is None:
        nvars = seen
    elif seen > nvars:
        raise ValueError(f"variable y{seen} exceeds nvars={nvars}")
    out = LaurentPoly.zero(nvars)
    for c, p in terms:
        e = [0] * nvars
        for i, k in p.items():
            e[i - 1] = k
        out = out + LaurentPoly.monomial(e, c)
    return out


# Functional spellings of the ring operations.

def add(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p + q


def mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p * q


def evaluate(p: LaurentPoly, values: Sequence) -> Fraction:
    return p.evaluate(values)


def poly_sum(polys: Iterable[LaurentPoly], nvars: int) -> LaurentPoly:
    out: dict = {}
    for p in polys:
        if p.nvars != nvars:
            raise ValueError("variable count mismatch")
        for e, c in p.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                del out[e]
    return LaurentPoly._raw(nvars, out)
