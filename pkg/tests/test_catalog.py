"""Decision tables: the catalogued examples, ideal axioms, trend soundness."""

from fractions import Fraction

import pytest

from adideals import catalog
from adideals import partitions as parts
from adideals import structure as struct
from adideals.catalog import (
    Certificate, fubini, generated_member, ideal, member, pseudo_union,
    pseudo_union_with_cuts, restrict, weight_constant, weight_harmonic,
)
from adideals.errors import DomainError
from adideals.sets import (
    Ap, Blowup, Branch, Col, Diag, Diff, Factorials, Fin, Image, Inter,
    OMEGA, Powers, RadoHom, Squares, Union, Affine, union_all, window,
)

Z = ideal("Z")
I1N = ideal("summable")
FIN = ideal("Fin")
W = ideal("W")
ED = ideal("ED")
EDFIN = ideal("EDfin")


def test_z_examples():
    assert member(Z, Ap(0, 1)).is_out           # the full set has density 1
    assert member(Z, Squares()).is_in
    # oracle behind the squares verdict: the counting bound up to 10^6
    from math import isqrt

    for n in [10**3, 10**4, 10**5, 10**6]:
        assert (isqrt(n - 1) + 1) / n <= (n ** -0.5) + 1 / n
    assert member(Z, Ap(1, 2)).is_out
    assert member(Z, Factorials()).is_in
    assert member(Z, Union(Squares(), Powers(2))).is_in


def test_summable_examples():
    v = member(I1N, Ap(1, 2))
    assert v.is_out
    # oracle: partial sums exceed 5 within a computable horizon
    total, n = 0.0, 1
    while total <= 5:
        total += 1 / (n + 1)
        n += 2
    assert n < 10**6
    assert member(I1N, Squares()).is_in
    assert member(I1N, Factorials()).is_in
    assert member(I1N, Image(Affine(1, 1), Factorials())).is_in
    assert member(I1N, Image(Affine(3, 2), Ap(0, 2))).is_out
    const = ideal("summable", weight=weight_constant(Fraction(1, 2)))
    assert member(const, Squares()).is_out
    assert member(const, Fin(range(40))).is_in


def test_farah_examples():
    F = ideal("Farah")
    assert member(F, Squares()).is_out
    # oracle: |squares ∩ [2^n, 2^{n+1})| >= n for n >= 14 (checked directly)
    from math import isqrt

    for n in range(14, 40):
        cnt = isqrt(2 ** (n + 1) - 1) - isqrt(2**n - 1)
        assert cnt >= n
    assert member(F, Factorials()).is_in
    assert member(F, Powers(2)).is_in
    assert member(F, Ap(0, 3)).is_out
    dy = parts.dyadic()
    assert member(F, Blowup(Squares(), dy)).is_in    # sum 1/k^2 converges
    assert member(F, Blowup(Ap(0, 2), dy)).is_out    # harmonic over evens


def test_fubini_examples():
    fxf = fubini("fin", "fin")
    fx0 = fubini("fin", "empty")
    zxf = fubini("empty", "fin")
    assert member(fx0, Col(3)).is_in
    assert member(zxf, Diag()).is_in
    assert member(fxf, union_all([Col(k) for k in range(4)])).is_in
    assert member(zxf, Col(3)).is_out
    assert member(fxf, Diag()).is_in
    assert member(fx0, Diag()).is_out
    assert member(fxf, Ap(0, 3)).is_out
    with pytest.raises(DomainError):
        fubini("fin", "z")


def test_ed_and_edfin():
    assert member(ED, Col(5)).is_in
    assert member(ED, Diag()).is_out
    assert member(ED, Ap(1, 2)).is_out
    assert member(EDFIN, Diag()).is_out
    assert member(EDFIN, Inter(Diag(), Ap(0, 2))).is_out
    assert member(EDFIN, Inter(Diag(), Col(4))).is_in
    assert member(EDFIN, Fin([0, 1, 3, 4])).is_in  # pair codes inside the triangle
    with pytest.raises(DomainError):
        member(EDFIN, Col(3))  # not a subset of the triangle


def test_w_examples():
    assert member(W, Ap(5, 9)).is_out
    assert member(W, Powers(2)).is_in
    assert member(W, Factorials()).is_in
    assert member(W, Squares()).answer == "Unknown"  # deliberately undecided
    assert member(W, Union(Powers(2), Factorials())).is_in
    assert member(W, Image(Affine(3, 1), Powers(2))).is_in


def test_small_table_ideals():
    for name in ["Ran", "Gfc", "Gc", "Solecki", "Nwd", "trN", "Conv", "I0"]:
        h = ideal(name)
        assert member(h, Fin([1, 5])).is_in
        assert member(h, OMEGA).is_out
    assert member(ideal("Ran"), RadoHom("clique", 3)).is_in
    assert member(ideal("trN"), Branch("1011")).is_in
    assert member(ideal("I0"), Col(2)).is_in
    assert member(ideal("I0"), Diag()).is_out


def test_restrict():
    zr = restrict(Z, Ap(0, 2))
    assert member(zr, Ap(0, 4)).is_out
    assert member(zr, Inter(Squares(), Ap(0, 2))).is_in
    fr = restrict(FIN, Ap(0, 2))
    assert member(fr, Fin([0, 2])).is_in
    with pytest.raises(DomainError):
        restrict(Z, Squares())  # restriction to a small set
    with pytest.raises(DomainError):
        member(zr, Ap(1, 2))  # not a subset of the carrier


def test_restrict_agrees_with_base_on_subsets():
    zr = restrict(Z, Ap(0, 2))
    cases = [Ap(0, 4), Ap(2, 4), Inter(Squares(), Ap(0, 2)), Fin([0, 2, 4]),
             Union(Ap(0, 8), Ap(4, 8)), Inter(Factorials(), Ap(0, 2))]
    for s in cases:
        base = member(Z, s)
        rest = member(zr, s)
        assert base.answer == rest.answer


# -- ideal axioms over a generated pool --------------------------------------


def _pool(ideal_handle):
    atoms = [Ap(0, 1), Ap(0, 2), Ap(1, 2), Ap(3, 5), Squares(), Factorials(),
             Powers(2), Fin([0, 1, 2]), Fin([]), Branch("110")]
    pool = list(atoms)
    for a in atoms:
        for b in atoms[:7]:
            pool.append(Union(a, b))
            pool.append(Inter(a, b))
            pool.append(Diff(a, b))
    return pool  # > 200 expressions


@pytest.mark.parametrize("handle", [Z, I1N, FIN, W, ideal("Farah")])
def test_axiom_closure_on_pool(handle):
    pool = _pool(handle)
    assert len(pool) > 200
    verdicts = {id(s): member(handle, s) for s in pool}
    for s in pool:
        for t in pool[:40]:
            vs, vt = verdicts[id(s)], verdicts[id(t)]
            if vs.answer == "Unknown" or vt.answer == "Unknown":
                continue
            vu = member(handle, Union(s, t))
            if vs.is_in and vt.is_in:
                assert vu.is_in
            if vs.is_out or vt.is_out:
                assert not vu.is_in
            # subsets of decided-In sets are In when decided
            vi = member(handle, Inter(s, t))
            if vs.is_in or vt.is_in:
                assert not vi.is_out


def test_verdict_soundness_against_window_trends():
    # In for a density ideal: the profile decreases over growing horizons
    profile = [len(window(Squares(), h)) / h for h in (100, 10_000, 100_000)]
    assert profile[0] > profile[1] > profile[2]
    assert member(Z, Squares()).is_in
    # Out for the summable ideal: partial sums pass the bound 5
    total = sum(1 / (n + 1) for n in range(1, 100_000, 2))
    assert total > 5
    assert member(I1N, Ap(1, 2)).is_out


# -- generated ideals ---------------------------------------------------------


def test_generated_member_ran():
    clique = tuple(RadoHom("clique", 4)._cached)
    cert = Certificate(generators=(clique,))
    inside = Fin(clique[:3])
    assert generated_member("ran", cert, inside, 30)
    assert not generated_member("ran", Certificate(()), Fin([0, 1]), 2)
    bad = Certificate(generators=((2, 4, 16, 65536),))  # a path, not homogeneous
    with pytest.raises(DomainError):
        generated_member("ran", bad, inside, 10)


def test_generated_member_id():
    cert = Certificate(generators=(Ap(0, 2),), exceptional=frozenset([1]))
    target = Union(Ap(0, 2), Fin([1]))
    assert generated_member("id", cert, target, 50)
    assert not generated_member("id", Certificate((Ap(0, 2),)), target, 50)


def test_generated_member_solecki():
    # code 0 is the depth-1 set {"0"}: covered by any branch starting 0
    cert = Certificate(generators=("000",))
    assert generated_member("solecki", cert, Fin([0]), 2)
    assert not generated_member("solecki", cert, Fin([1]), 2)
    deep = Fin([2])  # first depth-2 code; needs at least 2 prefix bits
    assert not generated_member("solecki", Certificate(("0",)), deep, 3)


def test_omega_code_enumeration():
    seen = set()
    for code in range(40):
        d, words = catalog.omega_code_decode(code)
        assert len(words) == 1 << (d - 1)
        assert all(len(w) == d for w in words)
        key = (d, frozenset(words))
        assert key not in seen
        seen.add(key)
    assert catalog.omega_code_decode(0)[0] == 1
    assert catalog.omega_code_decode(2)[0] == 2


# -- pseudo-unions ------------------------------------------------------------


def test_pseudo_union_summable():
    members = [Factorials(), Image(Affine(1, 1), Factorials())]
    out, cuts = pseudo_union_with_cuts(I1N, members)
    assert member(I1N, out).is_in
    for m, cut in zip(members, cuts):
        leftover = [x for x in window(Diff(m, out), 10_000)]
        assert all(x < cut for x in leftover)
    # mass invariant: tail of the result past the largest cut is bounded by
    # the threshold sum, with exact rationals
    top = max(cuts)
    tail = struct.harmonic_tail_bound(out, top)
    assert tail is not None and tail <= Fraction(1) + Fraction(1, 2)


def test_pseudo_union_density():
    out, cuts = pseudo_union_with_cuts(Z, [Squares()])
    assert member(Z, out).is_in
    gone = window(Diff(Squares(), out), 100_000)
    assert all(x < cuts[0] for x in gone)


def test_pseudo_union_rejects_positive_member():
    with pytest.raises(DomainError):
        pseudo_union(I1N, [Ap(1, 2)])
    with pytest.raises(DomainError):
        pseudo_union(ideal("Ran"), [Fin([1])])  # no pseudo-union capability


def test_weight_divergence_spot_check():
    w = weight_harmonic()
    total, n = Fraction(0), 0
    while total < 5 and n < 200:
        total += w(n)
        n += 1
    assert total >= 2  # grows past small bounds quickly at the head
    assert sum(1 / (k + 1) for k in range(10**6)) > 14  # float spot check
