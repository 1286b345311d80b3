from math import factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ntasep.lattice import (Arrow, Sector, SectorError, basic_sectors, enumerate_sector,
                            format_word, merge_last, parse_word, rotate, sector_of)


def words(m):
    return [format_word(w) for w in enumerate_sector(Sector(m))]


def test_enumerate_112_matches_printed_rows():
    got = words((1, 1, 2))
    assert len(got) == 12
    assert got[:4] == ["1233", "1323", "1332", "2133"]
    assert got[-1] == "3321"


def test_enumerate_two_states():
    assert words((1, 1)) == ["12", "21"]


def test_enumerate_size_large_sector():
    # multinomial 9! / (1! 1! 2! 1! 4!), computed independently of Sector.size
    expected = factorial(9) // (factorial(2) * factorial(4))
    assert expected == 7560
    assert len(enumerate_sector(Sector((1, 1, 2, 1, 4)))) == expected
    assert Sector((1, 1, 2, 1, 4)).size() == expected


@pytest.mark.parametrize("counts", [(1, 1, 2), (2, 1, 1, 1), (1, 3, 2), (3,)])
def test_enumerate_sorted_unique_and_in_sector(counts):
    ws = enumerate_sector(Sector(counts))
    assert ws == sorted(set(ws))
    assert all(sector_of(w, len(counts)) == counts for w in ws)


def test_non_basic_rejected():
    with pytest.raises(SectorError):
        Sector((1, 0, 2))
    with pytest.raises(SectorError):
        Sector.parse("1,x")


def test_sector_of_examples():
    assert sector_of((4, 4, 3, 1, 2, 3, 4, 4, 4), 4) == (1, 1, 2, 5)
    assert sector_of((3, 2, 5, 1, 5, 5, 4, 5, 3), 5) == (1, 1, 2, 1, 4)
    assert sector_of((1, 2), 2) == (1, 1)
    assert sector_of((1, 1, 3), 3) == (2, 0, 1)


def test_merge_last():
    assert merge_last(Sector((1, 1, 2, 1, 4))) == Sector((1, 1, 2, 5))
    assert merge_last(Sector((1, 1, 2))) == Sector((1, 3))
    assert merge_last(Sector((2, 5))) == Sector((7,))
    with pytest.raises(SectorError):
        merge_last(Sector((4,)))


def test_rotate():
    assert rotate((1, 2, 3, 3), 1) == (2, 3, 3, 1)
    assert rotate((1, 2, 3, 3), 0) == (1, 2, 3, 3)


@given(st.lists(st.integers(1, 5), min_size=2, max_size=10), st.integers(-20, 20))
def test_rotate_inverse_and_length(w, s):
    w = tuple(w)
    assert rotate(rotate(w, s), len(w) - s) == w
    assert sorted(rotate(w, s)) == sorted(w)


@given(st.lists(st.integers(1, 6), min_size=2, max_size=8))
def test_merge_last_preserves_length(counts):
    m = Sector(tuple(counts))
    assert merge_last(m).length == m.length
    assert merge_last(m).alphabet == m.alphabet - 1


def test_basic_sectors_count():
    # compositions of 7 into 5 positive parts: C(6, 4)
    assert len(list(basic_sectors(4, 7))) == 15
    assert list(basic_sectors(3, 3)) == []


def test_word_notation():
    assert parse_word("1233") == (1, 2, 3, 3)
    assert parse_word("1,10,2") == (1, 10, 2)
    assert format_word((1, 10, 2)) == "1,10,2"
    with pytest.raises(ValueError):
        parse_word("1")
    with pytest.raises(ValueError):
        parse_word("124", alphabet=3)


def test_arrow_crossings():
    a = Arrow(lower=5, upper=2, value=2)
    assert [i for i in range(1, 10) if a.crosses(i, 9)] == [3, 4, 5]
    w = Arrow(lower=6, upper=9, value=3)
    assert w.wraps
    assert [i for i in range(1, 10) if w.crosses(i, 9)] == [1, 2, 3, 4, 5, 6]
    assert not any(Arrow(4, 4, 1).crosses(i, 9) for i in range(1, 10))
