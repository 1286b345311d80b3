"""Operators on the Fock-like space, built from delta, epsilon, A and the identity.

Operators act on basis states ``|mu_1, ..., mu_n>>`` with unbounded integer
labels and return sparse combinations ``{state: LaurentPoly}``.  This is the
tensor-product form of the representation, kept separate from the
closed-form rules in :mod:`ntasep.mpa` so the two can check each other.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

from .ring import LaurentPoly

# single-site actions: mu -> [(new_mu, integer coefficient), ...]
SiteAction = Callable[[int], list]


def _delta(mu):
    return [(mu - 1, 1)] if mu > 0 else []


def _eps(mu):
    return [(mu + 1, 1)]


def _vac(mu):
    return [(0, 1)] if mu == 0 else []


def _one(mu):
    return [(mu, 1)]


@dataclass(frozen=True)
class FockOps:
    """The fundamental single-site operators; swap one out to build a mutant."""

    delta: SiteAction = _delta
    eps: SiteAction = _eps
    A: SiteAction = _vac
    one: SiteAction = _one

    def B(self, mu):
        # B = 1 - A
        out = dict(self.one(mu))
        for s, c in self.A(mu):
            out[s] = out.get(s, 0) - c
        return [(s, c) for s, c in out.items() if c]

    def mutate(self, **kw) -> FockOps:
        return replace(self, **kw)


STANDARD = FockOps()


class Op:
    """Linear operator on ``n`` tensor factors with Laurent coefficients in ``nvars`` variables."""

    def __init__(self, n: int, nvars: int, fn: Callable[[tuple], dict]):
        self.n = n
        self.nvars = nvars
        self._fn = fn

    def __call__(self, state) -> dict:
        state = tuple(state)
        if len(state) != self.n:
            raise ValueError(f"state {state} has {len(state)} factors, expected {self.n}")
        return self._fn(state)

    def apply(self, vec: dict) -> dict:
        out: dict = {}
        for s, c in vec.items():
            for t, d in self(s).items():
                _acc(out, t, c * d)
        return out

    @classmethod
    def zero(cls, n, nvars):
        return cls(n, nvars, lambda s: {})

    @classmethod
    def identity(cls, n, nvars):
        return cls(n, nvars, lambda s: {s: LaurentPoly.one(nvars)})

    def _same(self, other):
        if (self.n, self.nvars) != (other.n, other.nvars):
            raise ValueError("operators live on different spaces")

    def __add__(self, other):
        self._same(other)

        def fn(s):
            out = dict(self(s))
            for t, c in other(s).items():
                _acc(out, t, c)
            return out
        return Op(self.n, self.nvars, fn)

    def __neg__(self):
        return Op(self.n, self.nvars, lambda s: {t: -c for t, c in self(s).items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        """Operator product (``other`` acts first) or scaling by a polynomial/int."""
        if isinstance(other, Op):
            self._same(other)
            return Op(self.n, self.nvars, lambda s: self.apply(other(s)))
        if isinstance(other, int):
            other = LaurentPoly.const(self.nvars, other)
        if isinstance(other, LaurentPoly):
            if not other:
                return Op.zero(self.n, self.nvars)
            return Op(self.n, self.nvars, lambda s: {t: c * other for t, c in self(s).items()})
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            return self * other
        return NotImplemented


def _acc(out, key, val):
    s = out.get(key)
    s = val if s is None else s + val
    if s:
        out[key] = s
    else:
        out.pop(key, None)


def tensor(factors: list, nvars: int, coef: LaurentPoly | int = 1) -> Op:
    """``coef * factors[0] (x) factors[1] (x) ...`` from single-site actions."""
    n = len(factors)
    if isinstance(coef, int):
        coef = LaurentPoly.const(nvars, coef)

    def fn(s):
        partial = [((), 1)]
        for f, mu in zip(factors, s):
            nxt = []
            for head, c in partial:
                for t, d in f(mu):
                    nxt.append((head + (t,), c * d))
            partial = nxt
            if not partial:
                return {}
        out: dict = {}
        for t, c in partial:
            _acc(out, t, coef * c)
        return out
    return Op(n, nvars, fn)


def a_entry(N: int, j: int, k: int, ops: FockOps = STANDARD,
            yvar: Callable[[int], LaurentPoly] | None = None) -> Op:
    """``a^(N)_{jk}`` written as sums of tensor products of fundamental operators.

    ``yvar(i)`` supplies the coefficient attached to ``y_i``; replacing it
    yields mutated representations.
    """
    if not (1 <= j <= N + 1 and 1 <= k <= N):
        raise IndexError(f"entry ({j}, {k}) outside a^({N})")
    n = N - 1
    yv = yvar or (lambda i: LaurentPoly.y(N, i))
    A, d, e, one, B = ops.A, ops.delta, ops.eps, ops.one, ops.B
    if j < k < N:
        return tensor([A] * (j - 1) + [d] + [one] * (k - j - 1) + [e] + [one] * (N - k - 1), N)
    if j < k == N:
        return tensor([A] * (j - 1) + [d] + [one] * (N - j - 1), N)
    if j == k:
        return tensor([A] * (j - 1) + [one] * (N - j), N)
    if j == N + 1 and k < N:
        tail = [e] + [one] * (N - k - 1)
        out = tensor([A] * (k - 1) + tail, N, yv(k))
        for i in range(1, k):
            out = out + tensor([A] * (i - 1) + [B] + [one] * (k - i - 1) + tail, N, yv(i))
        return out
    if j == N + 1 and k == N:
        out = tensor([A] * (N - 1), N, yv(N))
        for i in range(1, N):
            out = out + tensor([A] * (i - 1) + [B] + [one] * (N - i - 1), N, yv(i))
        return out
    return Op.zero(n, N)


def a_hat_entry(N: int, j: int, k: int, ops: FockOps = STANDARD) -> Op:
    """``\\hat a^(N)_{jk}``: nonzero only on the last row."""
    if not (1 <= j <= N + 1 and 1 <= k <= N):
        raise IndexError(f"entry ({j}, {k}) outside hat a^({N})")
    if j != N + 1:
        return Op.zero(N - 1, N)
    if k < N:
        return tensor([ops.one] * (k - 1) + [ops.eps] + [ops.one] * (N - k - 1), N)
    return tensor([ops.one] * (N - 1), N)


def to_text(vec: dict) -> str:
    if not vec:
        return "0"
    return " + ".join(f"({c})|{','.join(map(str, s))}>>" for s, c in sorted(vec.items()))
