import json
import random
from fractions import Fraction

import pytest
import sympy

from ntasep.generator import (KernelError, RateAssignment, build_generator, charpoly,
                              column_sums, dense_from_entries, generator_at, kernel_solve,
                              null_space, poly_divmod, stationary_kernel)
from ntasep.lattice import Sector, basic_sectors, enumerate_sector
from ntasep.mpa import stationary_mpa
from ntasep.ring import LaurentPoly, parse_poly


def outgoing_by_bond(word, x):
    """Per-bond enumeration of allowed hops, written independently of the generator."""
    L = len(word)
    moves = {}
    for i in range(L):
        left, right = word[i], word[(i + 1) % L]
        if left < right:
            new = list(word)
            new[i] = right
            new[(i + 1) % L] = left
            moves[tuple(new)] = moves.get(tuple(new), 0) + x[left - 1]
    return moves


def test_two_state_generator():
    M = build_generator(Sector((1, 1)))
    x1 = parse_poly("y1^-1", 1)
    assert M.rows == [(1, 2), (2, 1)]
    assert M.to_dense() == [[-x1, x1], [x1, -x1]]


def test_column_of_1233():
    m = Sector((1, 1, 2))
    M = build_generator(m)
    c = M.col_index((1, 2, 3, 3))
    column = {M.rows[r]: p for (r, cc), p in M.entries.items() if cc == c}
    x1, x2 = parse_poly("y1^-1", 2), parse_poly("y2^-1", 2)
    assert column == {(2, 1, 3, 3): x1, (1, 3, 2, 3): x2, (1, 2, 3, 3): -(x1 + x2)}
    # same moves from the per-bond oracle, at symbolic rates
    assert outgoing_by_bond((1, 2, 3, 3), (x1, x2)) == {k: v for k, v in column.items()
                                                       if k != (1, 2, 3, 3)}


@pytest.mark.parametrize("counts", [(1, 1, 2), (2, 1, 2), (1, 1, 1, 1)])
def test_generator_against_bond_oracle_at_rates(counts):
    m = Sector(counts)
    rates = RateAssignment(tuple(range(1, m.nspecies + 1)))
    E = generator_at(m, rates)
    configs = enumerate_sector(m)
    for c, w in enumerate(configs):
        moves = outgoing_by_bond(w, rates.x)
        for r, v in enumerate(configs):
            want = moves.get(v, 0) if r != c else -sum(moves.values())
            assert E.get((r, c), 0) == want


@pytest.mark.parametrize("counts", [(1, 1, 2), (1, 2, 1, 1), (2, 2)])
def test_symbolic_build_evaluates_to_numeric(counts):
    m = Sector(counts)
    rates = RateAssignment(tuple(Fraction(k + 1, 3) for k in range(m.nspecies)))
    assert build_generator(m).evaluate(rates.y) == generator_at(m, rates)


@pytest.mark.parametrize("counts", [(1, 1, 2), (1, 2, 1, 1), (3, 1, 1)])
def test_generator_structure(counts):
    M = build_generator(Sector(counts))
    assert all(s.is_zero() for s in column_sums(M))
    for (r, c), p in M.entries.items():
        if r != c:
            (exps, coef), = p.terms.items()
            assert coef == 1 and sorted(exps)[0] == -1 and sum(exps) == -1


def test_kernel_two_state():
    E = generator_at(Sector((1, 1)), RateAssignment((3,)))
    assert kernel_solve(E, 2) == [Fraction(1, 2), Fraction(1, 2)]


def test_kernel_112_homogeneous():
    v = stationary_kernel(Sector((1, 1, 2)), RateAssignment((1, 1)))
    assert v == [Fraction(k, 24) for k in (1, 2, 3, 3, 2, 1, 1, 2, 3, 2, 1, 3)]


def test_kernel_112_inhomogeneous():
    # printed vector at y = (1, 1/2): y2^2 = 1/4, y2(y1+y2) = 3/4, y1^2+y1y2+y2^2 = 7/4; sum 11
    v = stationary_kernel(Sector((1, 1, 2)), RateAssignment((1, 2)))
    assert v == [Fraction(k, 44) for k in (1, 3, 7, 7, 3, 1, 1, 3, 7, 3, 1, 7)]


def test_kernel_rejects_reducible():
    E = {(0, 0): -1, (1, 0): 1}  # 3 states, two absorbing
    with pytest.raises(KernelError):
        kernel_solve(E, 3)


def test_null_space_against_sympy():
    rng = random.Random(4)
    for _ in range(15):
        n, k = rng.randint(2, 7), rng.randint(1, 6)
        rows = [[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(n)] for _ in range(k)]
        # force a dependency now and then
        if k > 1:
            rows[-1] = [a + 2 * b for a, b in zip(rows[0], rows[1])]
        E = {(i, j): v for i, row in enumerate(rows) for j, v in enumerate(row) if v}
        basis = null_space(E, k, n)
        want = sympy.Matrix(rows).nullspace()
        assert len(basis) == len(want)
        for v in basis:
            assert all(sum(row[j] * v[j] for j in range(n)) == 0 for row in rows)


def test_apply_examples():
    M = build_generator(Sector((1, 1)))
    zero = LaurentPoly.zero(1)
    assert M.apply([zero, zero]) == [zero, zero]
    one = LaurentPoly.one(1)
    assert M.apply([one, one]) == [zero, zero]
    with pytest.raises(ValueError):
        M.apply([one])


def test_apply_stationary_112_symbolic_and_rational():
    m = Sector((1, 1, 2))
    w = stationary_mpa(m)
    assert all(p.is_zero() for p in build_generator(m).apply(w))
    rng = random.Random(1)
    for _ in range(5):
        rates = RateAssignment((Fraction(rng.randint(1, 7), rng.randint(1, 7)),
                                Fraction(rng.randint(1, 7), rng.randint(1, 7))))
        vals = [p.evaluate(rates.y) for p in w]
        total = sum(vals)
        assert [v / total for v in vals] == stationary_kernel(m, rates)


def test_charpoly_against_sympy():
    t = sympy.Symbol("t")
    for counts in [(1, 1), (1, 1, 2), (1, 3), (2, 1, 1), (1, 1, 1, 1)]:
        m = Sector(counts)
        rates = RateAssignment(tuple(range(1, m.nspecies + 1)))
        dense = dense_from_entries(generator_at(m, rates), m.size())
        want = sympy.Matrix(dense).charpoly(t).all_coeffs()[::-1]
        assert charpoly(dense) == [Fraction(int(c.p), int(c.q)) for c in want]


def test_charpoly_two_state():
    dense = dense_from_entries(generator_at(Sector((1, 1)), RateAssignment((3,))), 2)
    assert charpoly(dense) == [0, 6, 1]  # t (t + 2 x1)


def test_poly_divmod():
    q, r = poly_divmod([0, 6, 1], [0, 1])
    assert q == [6, 1] and r == []
    q, r = poly_divmod([1, 0, 1], [1, 1])
    assert q == [-1, 1] and r == [2]


def test_rates_parse():
    assert RateAssignment.parse("1,1/2,3").x == (1, Fraction(1, 2), 3)
    for bad in ("0.5", "1,-1", "1,0", "a"):
        with pytest.raises(ValueError):
            RateAssignment.parse(bad)


def test_matrix_exports():
    M = build_generator(Sector((1, 1)))
    obj = json.loads(M.to_json())
    assert obj == {"rows": ["12", "21"], "cols": ["12", "21"],
                   "entries": [[0, 0, "-y1^-1"], [0, 1, "y1^-1"], [1, 0, "y1^-1"], [1, 1, "-y1^-1"]]}
    assert M.to_tsv().splitlines()[1] == "12\t21\ty1^-1"


def test_small_sectors_have_positive_one_dim_kernels():
    for N in (1, 2):
        for L in range(N + 1, 6):
            for m in basic_sectors(N, L):
                v = stationary_kernel(m, RateAssignment(tuple(range(1, N + 1))))
                assert all(t > 0 for t in v)
