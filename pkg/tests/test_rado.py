"""BIT graph: edges, extension witnesses, homogeneous sets."""

from itertools import product

import pytest

from adideals.errors import DomainError
from adideals.rado import is_homogeneous, rado_edge, rado_homogeneous, rado_witness


def test_edge_examples():
    assert rado_edge(1, 2) is True     # 2 = 10b, bit 1 set
    assert rado_edge(0, 2) is False    # bit 0 of 2 clear
    assert rado_edge(2, 1) is True     # symmetric
    with pytest.raises(DomainError):
        rado_edge(3, 3)


def test_witness_examples():
    assert rado_witness({0, 1}, {2}) == 3
    n = rado_witness({3}, {0, 1, 2})
    assert rado_edge(3, n) and all(not rado_edge(b, n) for b in (0, 1, 2))
    n = rado_witness(set(), {0, 5})
    assert not rado_edge(0, n) and not rado_edge(5, n)


def test_witness_exhaustive_small():
    universe = range(8)
    for assignment in product((0, 1, 2), repeat=8):
        a = {i for i in universe if assignment[i] == 1}
        b = {i for i in universe if assignment[i] == 2}
        n = rado_witness(a, b)
        assert n not in a | b
        assert all(rado_edge(x, n) for x in a)
        assert all(not rado_edge(x, n) for x in b)


def test_homogeneous_examples():
    assert rado_homogeneous("clique", 1) == [2]
    clique = rado_homogeneous("clique", 3)
    assert clique == [2, 4, 20]
    assert is_homogeneous(clique, "clique") == (True, None)
    indep = rado_homogeneous("independent", 3)
    assert is_homogeneous(indep, "independent") == (True, None)
    for n in range(1, 5):
        ok, bad = is_homogeneous(rado_homogeneous("clique", n), "clique")
        assert ok, bad
    for n in range(1, 12):
        ok, bad = is_homogeneous(rado_homogeneous("independent", n), "independent")
        assert ok, bad


def test_clique_size_cap():
    with pytest.raises(DomainError):
        rado_homogeneous("clique", 12)


def test_spec_tower_is_not_homogeneous():
    # the iterated tower 2, 4, 16, 65536 is a path, not a clique: bit 2 of 16
    # is clear, so blind tower constructions must be rejected by verification
    ok_clique, _ = is_homogeneous([2, 4, 16, 65536], "clique")
    ok_indep, _ = is_homogeneous([2, 4, 16, 65536], "independent")
    assert not ok_clique and not ok_indep
