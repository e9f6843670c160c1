"""The exact-analysis layer checked against brute force."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from adideals import (
    Affine, Ap, Branch, Blowup, Col, Diag, Diff, Factorials, Fin, Image,
    Inter, OMEGA, Powers, Preimage, Squares, Union, window,
)
from adideals import partitions as parts
from adideals import structure as struct

_ep_atoms = st.sampled_from(
    [Ap(0, 1), Ap(1, 2), Ap(0, 2), Ap(2, 3), Ap(5, 7), Fin([0, 4, 9]), Fin([])]
)


def _ep_exprs(depth):
    if depth == 0:
        return _ep_atoms
    sub = _ep_exprs(depth - 1)
    return st.one_of(
        _ep_atoms,
        st.tuples(sub, sub).map(lambda ab: Union(*ab)),
        st.tuples(sub, sub).map(lambda ab: Inter(*ab)),
        st.tuples(sub, sub).map(lambda ab: Diff(*ab)),
        sub.map(lambda a: Image(Affine(3, 2), a)),
        sub.map(lambda a: Preimage(Affine(2, 1), a)),
    )


@settings(max_examples=120, deadline=None)
@given(expr=_ep_exprs(3), h=st.integers(0, 400))
def test_ep_normal_form_matches_windows(expr, h):
    ep = struct.ep_of(expr)
    assert ep is not None
    assert ep.window(h) == window(expr, h)


@settings(max_examples=80, deadline=None)
@given(expr=_ep_exprs(2), lo=st.integers(0, 300), hi=st.integers(0, 300))
def test_ep_count_matches_windows(expr, lo, hi):
    ep = struct.ep_of(expr)
    got = ep.count(min(lo, hi), max(lo, hi))
    w = window(expr, max(lo, hi))
    assert got == sum(1 for x in w if x >= min(lo, hi))


@settings(max_examples=60, deadline=None)
@given(a=_ep_exprs(2), b=_ep_exprs(2))
def test_ep_subset_decision(a, b):
    ea, eb = struct.ep_of(a), struct.ep_of(b)
    claimed = ea.subset_of(eb)
    wa, wb = set(window(a, 600)), set(window(b, 600))
    if claimed:
        assert wa <= wb
    else:
        # refute on a window large enough to see the periodic tail
        assert not (wa <= wb) or not ea.finite or ea.count(0, 600) == len(wa & wb)


def test_count_in_range_beyond_window_reach():
    lo, hi = 10**12, 10**12 + 2 * 10**9
    oracle = sum(1 for k in range(10**6 - 1, 10**6 + 1100) if lo <= k * k < hi)
    assert struct.count_in_range(Squares(), lo, hi) == oracle
    assert struct.count_in_range(Ap(3, 7), 10**15, 10**15 + 70) == 10
    oracle_fact = 0
    v, k = 1, 1
    while v < 10**18:
        oracle_fact += 1
        k += 1
        v *= k
    assert struct.count_in_range(Factorials(), 0, 10**18) == oracle_fact
    assert struct.count_in_range(Powers(2), 1 << 100, 1 << 200) == 100


@pytest.mark.parametrize(
    "expr",
    [
        Squares(), Factorials(), Powers(3), Col(2), Diag(), Branch("110"),
        Union(Squares(), Ap(1, 4)), Inter(Squares(), Ap(0, 2)),
        Diff(Squares(), Fin([0, 4])), Image(Affine(2, 1), Factorials()),
        Union(Factorials(), Powers(2)),
    ],
)
def test_count_in_range_matches_window(expr):
    w = window(expr, 700)
    for lo, hi in [(0, 700), (13, 500), (100, 101), (250, 250)]:
        got = struct.count_in_range(expr, lo, hi)
        assert got == sum(1 for x in w if lo <= x < hi)


def test_count_blowup_bigint_scale():
    dy = parts.dyadic()
    s = Blowup(Ap(0, 2), dy)  # even-index dyadic blocks
    # exact block-sum at a range no window could reach
    expected = sum(1 << c for c in range(0, 120, 2))
    assert struct.count_in_range(s, 0, 1 << 120) == expected


def test_is_finite():
    assert struct.is_finite(Fin([1, 2])) is True
    assert struct.is_finite(Inter(Ap(0, 2), Ap(1, 2))) is True
    assert struct.is_finite(Squares()) is False
    assert struct.is_finite(Union(Fin([1]), Powers(2))) is False
    assert struct.is_finite(Blowup(Fin([3]), parts.dyadic())) is True
    assert struct.is_finite(Diff(Ap(0, 2), Ap(0, 2))) is True


def test_harmonic_tail_bound_is_sound_and_shrinking():
    for expr in [Squares(), Factorials(), Powers(2), Branch("1011"),
                 Union(Squares(), Factorials()), Image(Affine(3, 5), Powers(2))]:
        prev = None
        for cutoff in [0, 10, 100, 10_000]:
            bound = struct.harmonic_tail_bound(expr, cutoff)
            assert bound is not None
            actual = sum(Fraction(1, x + 1) for x in window(expr, 20_000) if x >= cutoff)
            assert bound >= actual
            if prev is not None:
                assert bound <= prev
            prev = bound
    assert struct.harmonic_tail_bound(Ap(1, 2), 0) is None


def test_mu_dyadic_bound_is_sound():
    dy = parts.dyadic()
    for expr in [Squares(), Factorials(), Powers(2), Fin([3, 900]),
                 Union(Squares(), Powers(3)), Image(Affine(2, 0), Squares())]:
        for m in range(2, 14):
            bound = struct.mu_dyadic_sup_bound(expr, m)
            assert bound is not None
            for mm in range(m, 15):
                lo, hi = 1 << mm, 1 << (mm + 1)
                actual = Fraction(
                    sum(1 for x in window(expr, hi) if x >= lo), 1 << mm
                )
                assert bound >= actual, (expr, m, mm)


def test_densities():
    assert struct.upper_density(Ap(1, 4)) == Fraction(1, 4)
    assert struct.upper_density(Squares()) == 0
    assert struct.lower_density(Diff(OMEGA, Squares())) == 1
    assert struct.lower_density(Inter(Diff(OMEGA, Squares()), Ap(1, 1))) == 1
    assert struct.lower_density(Inter(Ap(0, 2), Ap(0, 3))) == Fraction(1, 6)


def test_proves_subset():
    assert struct.proves_subset(Ap(0, 4), Ap(0, 2))
    assert not struct.proves_subset(Ap(0, 2), Ap(0, 4))
    assert struct.proves_subset(Inter(Squares(), Ap(0, 2)), Squares())
    assert struct.proves_subset(Diff(Squares(), Fin([4])), Squares())
    assert struct.proves_subset(Fin([4, 16]), Squares())
    dy = parts.dyadic()
    assert struct.proves_subset(Blowup(Branch("10"), dy), Ap(1, 1))
    assert struct.proves_subset(Union(Ap(0, 4), Ap(2, 4)), Ap(0, 2))


def test_simplify_branch_meets():
    a, b = Branch("1011"), Branch("1000")
    got = struct.simplify(Inter(a, b))
    assert isinstance(got, Fin)
    assert sorted(got.elements) == [0, 2, 5]  # codes of e, "1", "10"
    same = struct.simplify(Inter(Branch("10"), Branch("1")))
    assert same == Branch("10")  # equal as padded branches


def test_simplify_blowup_merge():
    dy = parts.dyadic()
    got = struct.simplify(Inter(Blowup(Branch("1011"), dy), Blowup(Branch("1000"), dy)))
    assert isinstance(got, Fin)
    assert len(got.elements) == 1 + 4 + 32


def test_branch_divergence():
    assert struct.branch_divergence("1011", "1000") == 2
    assert struct.branch_divergence("10", "1") is None
    assert struct.branch_divergence("0", "") is None
    assert struct.branch_divergence("1", "11") == 1
