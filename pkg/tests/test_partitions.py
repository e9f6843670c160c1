"""Block semantics, coverage, and the trace construction."""

import pytest
from hypothesis import given, settings, strategies as st

from adideals import Ap, parse_partition
from adideals import partitions as parts
from adideals.errors import DomainError
from adideals.sets import contains


def test_dyadic_blocks_match_paper_formula():
    dy = parts.dyadic()
    assert dy.blocks(3) == [[1], [2, 3], [4, 5, 6, 7]]
    assert dy.block_size(10) == 1 << 10
    assert dy.block_bounds(510) == (1 << 510, (1 << 511) - 1)


def test_interval_examples():
    p = parts.from_boundaries([0, 2, 5])
    assert p.blocks(2) == [[0, 1], [2, 3, 4]]
    q = parse_partition("(explicit (0) (1 2) tail 3)")
    assert q.blocks(3) == [[0], [1, 2], [3, 4, 5]]


def test_explicit_prefix_validation():
    with pytest.raises(DomainError):
        parts.explicit_prefix([[0], [2, 3]], 2)  # gap at 1
    with pytest.raises(DomainError):
        parts.explicit_prefix([[0], []], 2)


def test_blockrule_partitions():
    cols = parts.DiagColumns()
    from adideals.coding import pair_encode

    assert cols.block(3) == sorted(pair_encode(3, k) for k in range(4))
    assert cols.index_of(pair_encode(5, 2)) == 5
    assert cols.index_of(pair_encode(2, 5)) is None
    tri = parts.PairTriangles()
    assert tri.block_size(4) == 9
    assert tri.index_of(pair_encode(2, 7)) == 7


@pytest.mark.parametrize(
    "make",
    [
        parts.dyadic,
        lambda: parts.width(3),
        parts.triangular,
        parts.PairTriangles,
        lambda: parts.from_boundaries([0, 2, 5], 4),
        lambda: parts.explicit_prefix([[0], [1, 2]], 3),
    ],
)
def test_coverage_every_ambient_point_in_exactly_one_block(make):
    p = make()
    hits = {}
    n = 0
    while True:
        lo, _hi = p.block_bounds(n)
        if lo >= 10_000:
            break
        for x in p.block(n):
            assert x not in hits, f"{x} appears in blocks {hits[x]} and {n}"
            hits[x] = n
        n += 1
    for x in range(10_000):
        if contains(p.ambient, x):
            assert x in hits and hits[x] == p.index_of(x)


def test_coverage_diag_columns():
    p = parts.DiagColumns()
    seen = {}
    for n in range(60):
        for x in p.block(n):
            assert x not in seen
            seen[x] = n
    for x in range(1000):
        if contains(p.ambient, x):
            assert seen.get(x) == p.index_of(x)


def test_dyadic_trace():
    tr = parts.dyadic_trace(Ap(0, 2))
    assert tr.block(0) == [2]          # evens in [2,4); [1,2) was empty
    assert tr.block(1) == [4, 6]
    assert tr.block(2) == [8, 10, 12, 14]
    assert tr.index_of(10) == 2
    assert tr.index_of(3) is None
    assert tr.block_size(3) == 8
    lo, hi = tr.block_bounds(3)
    assert (lo, hi) == (16, 30)


def test_mass_chunks_first_blocks():
    from adideals.catalog import weight_harmonic
    from adideals.sets import OMEGA

    p = parts.mass_chunks(OMEGA, weight_harmonic())
    # exact rational partial sums: 1 >= 1; 1/2+1/3+1/4 = 13/12 >= 1
    assert p.block(0) == [0]
    assert p.block(1) == [1, 2, 3]
    assert p.block(2) == list(range(4, 12))


@settings(max_examples=40, deadline=None)
@given(w=st.integers(1, 9), n=st.integers(0, 30))
def test_width_block_arithmetic(w, n):
    p = parts.width(w)
    assert p.block(n) == list(range(w * n, w * n + w))
    assert p.index_of(w * n) == n
