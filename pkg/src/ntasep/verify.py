"""Executable checks for every identity the construction relies on.

Each check returns a :class:`CheckReport`; a failing report always carries a
counterexample with the inputs and both evaluated sides.  Operator identities
are checked by acting on basis states with labels in ``{0, 1, 2}``: every
fundamental operator only distinguishes ``mu = 0`` from ``mu >= 1`` and shifts
by at most one, which :func:`check_branch_coverage` asserts separately.
"""

from __future__ import annotations

import json
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Callable, Sequence

from . import alalgo, generator, mpa
from .lattice import Sector, basic_sectors, format_word, merge_last
from .matrix import SparsePolyMatrix, fraction_matrix_apply
from .operators import STANDARD, FockOps, Op, a_entry, a_hat_entry, tensor, to_text
from .ring import LaurentPoly

LEVELS = (0, 1, 2)


@dataclass
class CheckReport:
    name: str
    scope: str
    status: str = "pass"
    counterexample: dict | None = None
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def fail(self, **counterexample) -> CheckReport:
        self.status = "fail"
        self.counterexample = {k: _jsonable(v) for k, v in counterexample.items()}
        return self

    def to_json_obj(self) -> dict:
        return asdict(self)

    def line(self) -> str:
        return f"{self.status.upper():4s}  {self.name} [{self.scope}]"


def _jsonable(v):
    if isinstance(v, (str, int, bool)) or v is None:
        return v
    if isinstance(v, (LaurentPoly, Fraction)):
        return str(v)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return str(v)


def _compare_ops(lhs: Op, rhs: Op, levels=LEVELS):
    """First basis state on which two operators differ, as ``(state, lhs, rhs)``."""
    for s in product(levels, repeat=lhs.n):
        a, b = lhs(s), rhs(s)
        if a != b:
            return s, a, b
    return None


# -- operator algebra ------------------------------------------------------

def check_dehp(ops: FockOps = STANDARD) -> CheckReport:
    """delta eps = 1, delta A = 0, A eps = 0, plus A^2 = A, B = 1 - A idempotent, delta B = delta."""
    rep = CheckReport("dehp", "mu in {0,1,2}")
    site = lambda f: tensor([f], 0)
    d, e, A, one, B = (site(ops.delta), site(ops.eps), site(ops.A), site(ops.one), site(ops.B))
    zero = Op.zero(1, 0)
    relations = [
        ("delta*eps = 1", d * e, one),
        ("delta*A = 0", d * A, zero),
        ("A*eps = 0", A * e, zero),
        ("A*A = A", A * A, A),
        ("A + B = 1", A + B, one),
        ("B*B = B", B * B, B),
        ("delta*B = delta", d * B, d),
    ]
    failures = []
    for label, lhs, rhs in relations:
        bad = _compare_ops(lhs, rhs)
        if bad:
            s, a, b = bad
            failures.append({"relation": label, "state": s, "lhs": to_text(a), "rhs": to_text(b)})
    rep.details["relations"] = len(relations)
    if failures:
        return rep.fail(**failures[0], all_failures=failures)
    return rep


def check_branch_coverage(ops: FockOps = STANDARD, upto: int = 6) -> CheckReport:
    """Every fundamental action on ``mu >= 1`` is the action on ``mu = 1`` shifted by ``mu - 1``."""
    rep = CheckReport("branch-coverage", f"mu in 1..{upto}")
    for name in ("delta", "eps", "A", "one", "B"):
        f = getattr(ops, name)
        base = f(1)
        if any(abs(t - 1) > 1 for t, _ in base):
            return rep.fail(operator=name, state=1, action=base, reason="shift larger than one")
        for mu in range(2, upto + 1):
            got = sorted(f(mu))
            want = sorted((t + mu - 1, c) for t, c in base)
            if got != want:
                return rep.fail(operator=name, state=mu, lhs=got, rhs=want)
    return rep


def two_species_operators(ops: FockOps = STANDARD) -> tuple[Op, Op, Op]:
    """``X1 = 1 + delta``, ``X2 = A``, ``X3 = y1 eps + y1 B + y2 A``."""
    y1, y2 = LaurentPoly.y(2, 1), LaurentPoly.y(2, 2)
    X1 = tensor([ops.one], 2) + tensor([ops.delta], 2)
    X2 = tensor([ops.A], 2)
    X3 = tensor([ops.eps], 2, y1) + tensor([ops.B], 2, y1) + tensor([ops.A], 2, y2)
    return X1, X2, X3


def check_two_species_algebra(ops: FockOps = STANDARD) -> CheckReport:
    """X1 X3 = y1 X1 + X3, X2 X3 = y2 X2, X1 X2 = X2 (with 1/x_a = y_a)."""
    rep = CheckReport("two-species-algebra", "mu in {0,1,2}")
    X1, X2, X3 = two_species_operators(ops)
    y1, y2 = LaurentPoly.y(2, 1), LaurentPoly.y(2, 2)
    relations = [
        ("X1*X3 = y1*X1 + X3", X1 * X3, y1 * X1 + X3),
        ("X2*X3 = y2*X2", X2 * X3, y2 * X2),
        ("X1*X2 = X2", X1 * X2, X2),
    ]
    for label, lhs, rhs in relations:
        bad = _compare_ops(lhs, rhs)
        if bad:
            s, a, b = bad
            return rep.fail(relation=label, state=s, lhs=to_text(a), rhs=to_text(b))
    return rep


def hat_relation_sides(N, j, jp, k, kp, a, ahat):
    """Both sides of the component ``<j j'| . |k k'>`` of the hat relation.

    The case split on ``(j vs j', k vs k')`` picks which rate terms appear.
    """
    x = lambda i: LaurentPoly.x(N, i)
    rhs = ahat(j, k) * a(jp, kp) - a(j, k) * ahat(jp, kp)
    if j < jp:
        lhs = -x(j) * (a(j, k) * a(jp, kp))
    elif j > jp:
        lhs = x(jp) * (a(jp, k) * a(j, kp))
    else:
        lhs = Op.zero(N - 1, N)
    if k < kp:
        lhs = lhs - x(k) * (a(j, kp) * a(jp, k) - a(j, k) * a(jp, kp))
    return lhs, rhs


def check_hat_relation(N: int, a: Callable | None = None, ahat: Callable | None = None,
                       levels=LEVELS) -> CheckReport:
    """All ``(N+1)^2 N^2`` components of the hat relation on ``levels^(N-1)``."""
    rep = CheckReport("hat-relation", f"N={N}")
    if N < 1:
        raise ValueError("N must be at least 1")
    a = a or (lambda j, k: a_entry(N, j, k))
    ahat = ahat or (lambda j, k: a_hat_entry(N, j, k))
    cache_a, cache_h = {}, {}

    def ca(j, k):
        if (j, k) not in cache_a:
            cache_a[j, k] = _memo(a(j, k))
        return cache_a[j, k]

    def ch(j, k):
        if (j, k) not in cache_h:
            cache_h[j, k] = _memo(ahat(j, k))
        return cache_h[j, k]

    count = 0
    for j, jp in product(range(1, N + 2), repeat=2):
        for k, kp in product(range(1, N + 1), repeat=2):
            lhs, rhs = hat_relation_sides(N, j, jp, k, kp, ca, ch)
            bad = _compare_ops(lhs, rhs, levels)
            count += 1
            if bad:
                s, l, r = bad
                return rep.fail(quadruple=(j, jp, k, kp), state=s, lhs=to_text(l), rhs=to_text(r))
    rep.details["components"] = count
    return rep


def _memo(op: Op) -> Op:
    cache: dict = {}

    def fn(s):
        if s not in cache:
            cache[s] = op(s)
        return cache[s]
    return Op(op.n, op.nvars, fn)


def check_local_action(N: int, levels=(0, 1, 2, 3)) -> CheckReport:
    """Closed-form entry actions agree with the tensor-product representation."""
    rep = CheckReport("local-action", f"N={N}")
    for j in range(1, N + 2):
        for k in range(1, N + 1):
            for pair, closed in (((j, k, "a"), mpa.apply_entry), ((j, k, "hat"), mpa.apply_hat_entry)):
                op = a_entry(N, j, k) if pair[2] == "a" else a_hat_entry(N, j, k)
                for s in product(levels, repeat=N - 1):
                    res = closed(N, j, k, s)
                    want = {} if res is None else {res[1]: LaurentPoly.monomial(res[0])}
                    got = op(s)
                    if got != want:
                        return rep.fail(entry=pair, state=s, closed_form=to_text(want),
                                        tensor_form=to_text(got))
    return rep


# -- conjugation, stationarity, equivalence ------------------------------

def _first_difference(P: SparsePolyMatrix, Q: SparsePolyMatrix):
    for key in sorted(set(P.entries) | set(Q.entries)):
        p, q = P[key], Q[key]
        if p != q:
            r, c = key
            return format_word(P.rows[r]), format_word(P.cols[c]), p, q
    return None


def _generator_lifted(m: Sector, nvars: int) -> SparsePolyMatrix:
    return generator.build_generator(m).lift(nvars)


def check_conjugation(m: Sector, psi: SparsePolyMatrix | None = None) -> CheckReport:
    """``M_m psi_m = psi_m M_m'`` exactly over the Laurent ring."""
    rep = CheckReport("conjugation", f"m={m}")
    psi = psi if psi is not None else mpa.conjugation_matrix(m)
    N = m.nspecies
    lhs = _generator_lifted(m, N).matmul(psi)
    rhs = psi.matmul(_generator_lifted(merge_last(m), N))
    bad = _first_difference(lhs, rhs)
    if bad:
        return rep.fail(row=bad[0], col=bad[1], lhs=bad[2], rhs=bad[3])
    return rep


def rate_points(count: int, nspecies: int, seed: int = 0, top: int = 7) -> list:
    """Seeded rational rate assignments with numerators and denominators in ``1..top``."""
    rng = random.Random(seed)
    return [generator.RateAssignment(tuple(Fraction(rng.randint(1, top), rng.randint(1, top))
                                           for _ in range(nspecies)))
            for _ in range(count)]


def normalize(values: Sequence[Fraction]) -> list[Fraction]:
    total = sum(values)
    return [v / total for v in values]


def stationary(m: Sector, route: str) -> list[LaurentPoly]:
    if route == "mpa":
        return mpa.stationary_mpa(m)
    if route == "al":
        return alalgo.stationary_al(m)
    raise ValueError(f"unknown route {route!r}")


def check_stationarity(m: Sector, route: str = "mpa", points: int = 5, seed: int = 0,
                       weights: list | None = None) -> CheckReport:
    """Symbolic ``M_m P = 0`` plus exact agreement with kernel solves at seeded rates."""
    rep = CheckReport("stationarity", f"m={m} route={route}")
    w = weights if weights is not None else stationary(m, route)
    M = generator.build_generator(m)
    residual = M.apply(w)
    for i, r in enumerate(residual):
        if r:
            return rep.fail(config=format_word(M.rows[i]), lhs=r, rhs="0")
    for rates in rate_points(points, m.nspecies, seed):
        got = normalize([p.evaluate(rates.y) for p in w])
        want = generator.stationary_kernel(m, rates)
        if got != want:
            i = next(i for i in range(len(got)) if got[i] != want[i])
            return rep.fail(rates=str(rates), config=format_word(M.rows[i]), lhs=got[i], rhs=want[i])
    rep.details["rate_points"] = points
    return rep


def spot_check_stationary(m: Sector, weights: Sequence[LaurentPoly], points: int = 3,
                          seed: int = 0) -> CheckReport:
    """``M_m P = 0`` at seeded rational rates without forming the symbolic product."""
    rep = CheckReport("stationarity-spot", f"m={m} points={points}")
    n = m.size()
    for rates in rate_points(points, m.nspecies, seed):
        vec = [p.evaluate(rates.y) for p in weights]
        if any(v <= 0 for v in vec):
            return rep.fail(rates=str(rates), reason="nonpositive weight")
        res = fraction_matrix_apply(generator.generator_at(m, rates), n, vec)
        bad = next((i for i, r in enumerate(res) if r), None)
        if bad is not None:
            return rep.fail(rates=str(rates), row=bad, lhs=res[bad], rhs=0)
    return rep


def check_tr_eq_w(m: Sector) -> CheckReport:
    """Trace route and graphical route give the same conjugation matrix, zeros included."""
    rep = CheckReport("tr-eq-w", f"m={m}")
    P, Q = mpa.conjugation_matrix(m), alalgo.psi_al(m)
    bad = _first_difference(P, Q)
    if bad:
        return rep.fail(row=bad[0], col=bad[1], lhs=bad[2], rhs=bad[3])
    rep.details["nonzero"] = P.nnz()
    return rep


def spectral_inclusion(big: Sequence[Sequence], small: Sequence[Sequence], scope: str) -> CheckReport:
    """Char poly of ``small`` divides char poly of ``big``, exactly."""
    rep = CheckReport("spectral-inclusion", scope)
    pb, ps = generator.charpoly(big), generator.charpoly(small)
    q, r = generator.poly_divmod(pb, ps)
    if r:
        return rep.fail(big=[str(c) for c in pb], small=[str(c) for c in ps],
                        remainder=[str(c) for c in r])
    rep.details["quotient_degree"] = len(q) - 1
    return rep


def check_spectral_inclusion(m: Sector, rates: generator.RateAssignment | None = None,
                             cap: int = generator.DEFAULT_CHARPOLY_CAP) -> CheckReport:
    rates = rates or generator.RateAssignment(tuple(range(1, m.nspecies + 1)))
    n, mp = m.size(), merge_last(m)
    if n > cap:
        from .lattice import CapExceeded
        raise CapExceeded(f"dim(M_m)={n} exceeds the char-poly cap {cap}")
    big = generator.dense_from_entries(generator.generator_at(m, rates), n)
    small = generator.dense_from_entries(
        generator.generator_at(mp, rates.restrict(mp.nspecies)), mp.size())
    return spectral_inclusion(big, small, f"m={m} x={rates}")


def check_positivity(m: Sector, route: str = "al", kernel: bool = True,
                     weights: list | None = None) -> CheckReport:
    """Nonnegative integer coefficients; the y = 1 specialization matches the homogeneous kernel."""
    rep = CheckReport("positivity", f"m={m}")
    w = weights if weights is not None else stationary(m, route)
    for i, p in enumerate(w):
        if not p or any(c < 0 for c in p.terms.values()):
            return rep.fail(index=i, poly=p)
        if any(e < 0 for exps in p.terms for e in exps):
            return rep.fail(index=i, poly=p, reason="negative exponent")
    ones = [p.substitute_ones() for p in w]
    g = 0
    for v in ones:
        g = gcd(g, v)
    rep.details["homogeneous_weights"] = [v // g for v in ones]
    if kernel:
        want = generator.stationary_kernel(m, generator.RateAssignment.homogeneous(m.nspecies))
        got = normalize([Fraction(v) for v in ones])
        if got != want:
            i = next(i for i in range(len(got)) if got[i] != want[i])
            return rep.fail(index=i, lhs=got[i], rhs=want[i])
    return rep


# -- suites ----------------------------------------------------------------

SUITES = ("dehp", "hat", "conjugation", "stationarity", "tr-eq-w", "spectral", "positivity")


def _sectors(max_n: int, max_l: int, min_n: int = 1):
    for N in range(min_n, max_n + 1):
        for L in range(N + 1, max_l + 1):
            yield from basic_sectors(N, L)


def plan(suite: str, max_n: int = 3, max_l: int = 6, seed: int = 0,
         cap: int = generator.DEFAULT_CHARPOLY_CAP, hat_max_n: int = 5) -> list[tuple]:
    """The ``(function, args)`` jobs making up a suite."""
    names = SUITES if suite == "all" else (suite,)
    jobs = []
    for name in names:
        if name == "dehp":
            jobs += [(check_dehp, ()), (check_branch_coverage, ()), (check_two_species_algebra, ())]
        elif name == "hat":
            top = max(hat_max_n, max_n) if suite != "all" else hat_max_n
            for N in range(2, top + 1):
                jobs += [(check_hat_relation, (N,)), (check_local_action, (N,))]
        elif name == "conjugation":
            jobs += [(check_conjugation, (m,)) for m in _sectors(max_n, max_l)]
        elif name == "stationarity":
            for m in _sectors(max_n, max_l):
                jobs += [(_stationarity_job, (m, "mpa", seed)), (_stationarity_job, (m, "al", seed))]
        elif name == "tr-eq-w":
            jobs += [(check_tr_eq_w, (m,)) for m in _sectors(max_n, max_l)]
        elif name == "spectral":
            jobs += [(check_spectral_inclusion, (m,)) for m in _sectors(max_n, max_l)
                     if m.size() <= cap]
        elif name == "positivity":
            jobs += [(check_positivity, (m,)) for m in _sectors(max_n, max_l)]
        else:
            raise ValueError(f"unknown suite {name!r}")
    return jobs


def _stationarity_job(m, route, seed):
    return check_stationarity(m, route, seed=seed)


def _run_job(job):
    fn, args = job
    return fn(*args)


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("NTASEP_WORKERS", "1")))
    except ValueError:
        return 1


def run_suite(suite: str = "all", workers: int | None = None, **kw) -> list[CheckReport]:
    """Run a suite; reports come back in plan order whatever the worker count."""
    jobs = plan(suite, **kw)
    workers = workers or worker_count()
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_job, jobs))
    return [_run_job(j) for j in jobs]


def reports_json(reports: Sequence[CheckReport]) -> str:
    return json.dumps([r.to_json_obj() for r in reports], indent=2)
