import itertools

import pytest
from hypothesis import given, strategies as st

from compmod.combinatorics import (
    Composition,
    count_strict,
    count_weak,
    enumerate_strict,
    enumerate_weak,
    rank_strict,
    rank_weak,
    strict_to_weak,
    unrank_strict,
    unrank_weak,
    weak_to_strict,
)


def brute_weak(I, N):
    return [t for t in itertools.product(range(I + 1), repeat=N) if sum(t) == I]


def brute_strict(I, N):
    return [t for t in itertools.product(range(1, I + 1), repeat=N) if sum(t) == I]


def test_count_weak_examples():
    assert count_weak(3, 3) == 10
    assert count_weak(4, 4) == 35
    assert count_weak(0, 5) == 1


def test_count_strict_examples():
    assert count_strict(7, 4) == len(brute_strict(7, 4)) == 20
    assert count_strict(3, 1) == 1
    assert count_strict(2, 5) == 0
    for N in range(1, 9):
        assert count_strict(N, N) == 1


def test_counts_are_exact_for_large_arguments():
    # far beyond 64-bit range; python ints do not overflow
    assert count_weak(200, 100) == count_weak(200, 100)
    assert count_weak(200, 100).bit_length() > 64


@pytest.mark.parametrize("bad", [(-1, 3), (3, 0), (2.5, 3)])
def test_count_rejects_bad_ranges(bad):
    with pytest.raises(ValueError):
        count_weak(*bad)


def test_table_order_weak_3_3():
    got = [c.parts for c in enumerate_weak(3, 3)]
    assert got == [(0, 0, 3), (0, 1, 2), (0, 2, 1), (0, 3, 0), (1, 0, 2),
                   (1, 1, 1), (1, 2, 0), (2, 0, 1), (2, 1, 0), (3, 0, 0)]
    assert [c.parts for c in enumerate_weak(1, 2)] == [(0, 1), (1, 0)]


def test_enumerate_weak_4_4_ends():
    got = [c.parts for c in enumerate_weak(4, 4)]
    assert len(got) == 35
    assert got[0] == (0, 0, 0, 4) and got[-1] == (4, 0, 0, 0)
    assert got == sorted(brute_weak(4, 4))


def test_enumerate_strict_examples():
    assert [c.parts for c in enumerate_strict(4, 2)] == [(1, 3), (2, 2), (3, 1)]
    assert [c.parts for c in enumerate_strict(3, 3)] == [(1, 1, 1)]
    got = enumerate_strict(7, 4)
    assert len(got) == 20 and got[0].parts == (1, 1, 1, 4)


@pytest.mark.parametrize("I", range(0, 9))
@pytest.mark.parametrize("N", range(1, 9))
def test_weak_matches_brute_force(I, N):
    got = [c.parts for c in enumerate_weak(I, N)]
    assert got == sorted(brute_weak(I, N))
    assert len(got) == count_weak(I, N)
    assert all(a < b for a, b in zip(got, got[1:]))
    for r, parts in enumerate(got):
        assert rank_weak(parts) == r
        assert unrank_weak(I, N, r).parts == parts


@pytest.mark.parametrize("I", range(1, 9))
@pytest.mark.parametrize("N", range(1, 9))
def test_strict_matches_brute_force(I, N):
    if N > I:
        assert enumerate_strict(I, N) == []
        return
    got = [c.parts for c in enumerate_strict(I, N)]
    assert got == sorted(brute_strict(I, N))
    assert len(got) == count_strict(I, N)
    for r, parts in enumerate(got):
        assert rank_strict(parts) == r
        assert unrank_strict(I, N, r).parts == parts
        assert strict_to_weak(parts).parts in set(brute_weak(I - N, N))


def test_table_ranks():
    assert rank_weak((0, 0, 3)) == 0
    assert rank_weak((1, 1, 1)) == 5
    assert rank_weak((2, 1, 0)) == 8
    assert unrank_weak(3, 3, 0).parts == (0, 0, 3)
    assert unrank_weak(3, 3, 9).parts == (3, 0, 0)
    assert unrank_weak(4, 4, 17).parts == sorted(brute_weak(4, 4))[17]


def test_unrank_out_of_range():
    with pytest.raises(IndexError):
        unrank_weak(3, 3, 10)
    with pytest.raises(IndexError):
        unrank_weak(3, 3, -1)


def test_strict_weak_bijection_examples():
    w = strict_to_weak(Composition((2, 1, 3, 1), "strict"))
    assert w.parts == (1, 0, 2, 0) and w.total == 3
    s = weak_to_strict((0, 0, 0))
    assert s.parts == (1, 1, 1) and s.kind == "strict"
    with pytest.raises(ValueError):
        strict_to_weak((1, 0, 2))


def test_composition_invariants():
    c = Composition((0, 2, 1))
    assert c.total == 3 and len(c) == 3 and str(c) == "3=0+2+1"
    with pytest.raises(ValueError):
        Composition((1, 0), "strict")
    with pytest.raises(ValueError):
        Composition(())
    with pytest.raises(ValueError):
        Composition((1, -1))


@st.composite
def weak_compositions(draw):
    N = draw(st.integers(1, 12))
    parts = draw(st.lists(st.integers(0, 15), min_size=N, max_size=N))
    return tuple(parts)


@given(weak_compositions())
def test_rank_unrank_roundtrip(parts):
    I, N = sum(parts), len(parts)
    r = rank_weak(parts)
    assert 0 <= r < count_weak(I, N)
    assert unrank_weak(I, N, r).parts == parts


@given(weak_compositions())
def test_strict_weak_roundtrip(parts):
    s = weak_to_strict(parts)
    assert s.total == sum(parts) + len(parts)
    assert strict_to_weak(s).parts == parts
