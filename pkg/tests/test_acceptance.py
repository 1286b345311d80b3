"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line with its runtime.

Run with ``pytest tests/test_acceptance.py`` (the lines are printed even
without ``-s``), or directly with ``python tests/test_acceptance.py``.
"""

import time
from contextlib import contextmanager
from math import comb

import pytest

from ntasep import verify
from ntasep.alalgo import al_construct, parse_boxes, psi_al, stationary_al
from ntasep.lattice import Sector, basic_sectors
from ntasep.mpa import conjugation_matrix, stationary_mpa, trace_word, trajectory
from ntasep.operators import STANDARD, a_entry
from ntasep.ring import LaurentPoly, parse_poly

from printed_values import printed_psi_112, printed_stationary_112


def _emit(line):
    print(line, flush=True)


@contextmanager
def criterion(number, title, limit, capsys=None):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        within = elapsed < limit
        status = "PASS" if ok and within else "FAIL"
        note = "" if within else f" (limit {limit:g}s exceeded)"
        line = f"[{status}] criterion {number:2d}: {title} in {elapsed:.2f}s{note}"
        if capsys is not None:
            with capsys.disabled():
                _emit("\n" + line)
        else:
            _emit(line)
    assert within, f"criterion {number} took {elapsed:.2f}s, limit {limit}s"


def sectors(max_n, max_l):
    for N in range(1, max_n + 1):
        for L in range(N + 1, max_l + 1):
            yield from basic_sectors(N, L)


def small_sectors(budget):
    """Every basic sector with at least two parts and at most ``budget`` configurations."""
    def rec(L, b):
        yield (L,)
        for a in range(1, L):
            c = comb(L, a)
            if c <= b:
                for rest in rec(L - a, b // c):
                    yield (a,) + rest
    # a sector with two or more parts has at least L configurations
    return [Sector(c) for L in range(2, budget + 1) for c in rec(L, budget) if len(c) > 1]


def assert_all(reports):
    bad = [r for r in reports if not r.passed]
    assert not bad, [(r.name, r.scope, r.counterexample) for r in bad[:3]]


def test_criterion_01_psi_112(capsys):
    with criterion(1, "conjugation matrix of (1,1,2) equals the printed 12x4 matrix", 1, capsys):
        assert conjugation_matrix(Sector((1, 1, 2))).to_dense() == printed_psi_112()


def test_criterion_02_stationary_112(capsys):
    with criterion(2, "stationary vector of (1,1,2) on both routes, factor y1^3", 1, capsys):
        m = Sector((1, 1, 2))
        want = [parse_poly("y1^3", 2) * p for p in printed_stationary_112()]
        assert stationary_mpa(m) == want
        assert stationary_al(m) == want


def test_criterion_03_worked_example(capsys):
    with criterion(3, "two-line worked example and its trace", 0.1, capsys):
        k = (4, 4, 3, 1, 2, 3, 4, 4, 4)
        res = al_construct(parse_boxes("BBWBWWBWB"), k)
        weight = parse_poly("y2^2*y3*y4", 4)
        assert res.upper == (3, 2, 5, 1, 5, 5, 4, 5, 3)
        assert res.weight_poly() == weight
        assert trace_word(4, res.upper, k) == weight
        assert trajectory(4, res.upper, k).fixed_state == (0, 0, 1)


def test_criterion_04_tr_eq_w(capsys):
    with criterion(4, "traces equal two-line weights for all sectors N<=4, L<=7", 300, capsys):
        assert_all(verify.check_tr_eq_w(m) for m in sectors(4, 7))


def test_criterion_05_stationarity(capsys):
    with criterion(5, "symbolic stationarity and kernel agreement, N<=3, L<=6", 300, capsys):
        reports = []
        for m in sectors(3, 6):
            reports.append(verify.check_stationarity(m, "mpa", points=5, seed=0))
            reports.append(verify.check_stationarity(m, "al", points=5, seed=1))
        assert_all(reports)


def test_criterion_06_intertwining(capsys):
    with criterion(6, "M_m psi_m = psi_m M_m' for all sectors N<=3, L<=6", 300, capsys):
        assert_all(verify.check_conjugation(m) for m in sectors(3, 6))


def test_criterion_07_operator_algebra(capsys):
    with criterion(7, "operator algebra, hat relation N=2..5 and mutants", 60, capsys):
        reports = [verify.check_dehp(), verify.check_branch_coverage(),
                   verify.check_two_species_algebra()]
        for N in range(2, 6):
            reports.append(verify.check_hat_relation(N))
            reports.append(verify.check_local_action(N))
        assert_all(reports)

        mutants = [
            verify.check_dehp(STANDARD.mutate(A=lambda mu: [(mu, 1)] if mu <= 1 else [])),
            verify.check_two_species_algebra(STANDARD.mutate(A=lambda mu: [(mu, 1)])),
        ]
        swap = {1: 2, 2: 1, 3: 3}
        a = lambda j, k: (a_entry(3, j, k, yvar=lambda i: LaurentPoly.y(3, swap[i]))
                          if j == 4 else a_entry(3, j, k))
        mutants.append(verify.check_hat_relation(3, a=a))
        for r in mutants:
            assert not r.passed and r.counterexample


def test_criterion_08_spectral_inclusion(capsys):
    with criterion(8, "char poly of M_m' divides that of M_m, every dim <= 40", 60, capsys):
        secs = small_sectors(40)
        assert Sector((1, 1, 2)) in secs and Sector((1, 39)) in secs
        assert_all(verify.check_spectral_inclusion(m, cap=40) for m in secs)


def test_criterion_09_positivity(capsys):
    # no runtime is stated; the gate uses a generous bound
    with criterion(9, "nonnegative integer weights and y=1 kernel match, N<=4, L<=7", 900, capsys):
        secs = list(sectors(4, 7))
        # the permutation sectors L = N+1 are part of the sweep
        assert all(Sector((1,) * (N + 1)) in secs for N in range(1, 5))
        assert_all(verify.check_positivity(m, route="al", kernel=True) for m in secs)


def test_criterion_10_scale(capsys):
    with criterion(10, "stationary vector of (1,1,2,1,4) by the two-line route", 600, capsys):
        m = Sector((1, 1, 2, 1, 4))
        w = stationary_al(m)
        assert len(w) == 7560
        assert verify.spot_check_stationary(m, w, points=3, seed=0).passed


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
