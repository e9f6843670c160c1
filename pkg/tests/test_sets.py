"""Window semantics of the set vocabulary."""

import json

import pytest
from hypothesis import given, settings, strategies as st

from adideals import (
    Affine, Ap, Blowup, Branch, Col, Diag, Diff, EnumImage, Factorials, Fin,
    Image, Inter, OMEGA, Powers, PredFile, Preimage, RadoHom, Squares, Union,
    contains, parse_set, window,
)
from adideals.errors import DomainError, WindowError
from adideals import partitions as parts


def test_window_examples():
    assert window(Ap(1, 2), 10) == [1, 3, 5, 7, 9]
    assert window(Squares(), 17) == [0, 1, 4, 9, 16]
    assert window(Diff(Ap(0, 1), Ap(0, 2)), 8) == [1, 3, 5, 7]


def test_window_of_atoms():
    assert window(Factorials(), 30) == [1, 2, 6, 24]
    assert window(Powers(3), 100) == [1, 3, 9, 27, 81]
    assert window(Fin([5, 1, 9]), 6) == [1, 5]
    assert window(Branch("10"), 30) == [0, 2, 5, 11, 23]


def test_column_and_diag_windows():
    from adideals.coding import pair_encode

    w = window(Col(3), 200)
    assert w == sorted(pair_encode(3, j) for j in range(20) if pair_encode(3, j) < 200)
    d = set(window(Diag(), 200))
    assert all(pair_encode(n, m) in d for n in range(10) for m in range(n + 1)
               if pair_encode(n, m) < 200)
    assert pair_encode(0, 1) not in d


def test_blowup_windows():
    dy = parts.dyadic()
    assert window(Blowup(Fin([0, 2]), dy), 10) == [1, 4, 5, 6, 7]
    # union of all dyadic blocks is everything from 1 on
    assert window(Blowup(OMEGA, dy), 8) == [1, 2, 3, 4, 5, 6, 7]
    got = window(Blowup(Fin([0, 2, 5]), dy), 64)
    assert got == [1] + list(range(4, 8)) + list(range(32, 64))


def test_image_preimage_windows():
    double = Image(Affine(2, 0), Squares())
    assert window(double, 20) == [0, 2, 8, 18]
    pre = Preimage(Affine(2, 0), Squares())  # n with 2n a square
    assert window(pre, 20) == [0, 2, 8, 18]
    assert contains(pre, 8) and not contains(pre, 4)


def test_enum_image():
    evens = Ap(0, 2)
    # every second even number
    e = EnumImage(Ap(0, 2), evens)
    assert window(e, 20) == [0, 4, 8, 12, 16]
    assert contains(e, 8) and not contains(e, 2)


def test_branch_contains_is_prefix_test():
    b = Branch("101")
    assert contains(b, 0)  # empty word
    assert contains(b, 2)  # "1"
    assert not contains(b, 1)  # "0"
    from adideals.coding import binseq_encode

    assert contains(b, binseq_encode("1010"))
    assert not contains(b, binseq_encode("1011"))


def test_rado_hom_expr():
    s = RadoHom("independent", 3)
    assert window(s, 100) == [1, 4, 8]


def test_pred_file(tmp_path):
    path = tmp_path / "set.json"
    path.write_text(json.dumps({"horizon": 100, "elements": [3, 5, 50]}))
    s = PredFile(str(path))
    assert window(s, 10) == [3, 5]
    with pytest.raises(WindowError) as err:
        window(s, 200)
    assert err.value.index == 100
    with pytest.raises(WindowError):
        contains(s, 150)


def test_parser_roundtrip():
    for text in [
        "(ap 1 2)", "squares", "(union (ap 0 2) (fin 1))",
        "(inter squares (ap 0 2))", "(image (affine 2 1) factorials)",
        "(blowup (fin 0 2) dyadic)", "(branch 1011)", "(rado-hom clique 2)",
        "(enum-image (ap 0 2) (ap 0 2))", "(preimage (affine 3 0) squares)",
    ]:
        expr = parse_set(text)
        assert window(expr, 64) == window(parse_set(str(expr)), 64)


def test_parser_errors():
    with pytest.raises(DomainError):
        parse_set("(ap 1)")
    with pytest.raises(DomainError):
        parse_set("(unknown 3)")
    with pytest.raises(DomainError):
        parse_set("(ap 1 2")


# -- property: window monotonicity over randomly built expressions ----------

_atoms = st.sampled_from(
    [Ap(0, 1), Ap(1, 2), Ap(2, 5), Squares(), Factorials(), Powers(2),
     Fin([0, 3, 7]), Branch("101"), Col(2), Diag()]
)


def _exprs(depth: int):
    if depth == 0:
        return _atoms
    sub = _exprs(depth - 1)
    return st.one_of(
        _atoms,
        st.tuples(sub, sub).map(lambda ab: Union(*ab)),
        st.tuples(sub, sub).map(lambda ab: Inter(*ab)),
        st.tuples(sub, sub).map(lambda ab: Diff(*ab)),
        sub.map(lambda a: Image(Affine(2, 1), a)),
    )


@settings(max_examples=80, deadline=None)
@given(expr=_exprs(2), h1=st.integers(0, 300), h2=st.integers(0, 300))
def test_window_monotone(expr, h1, h2):
    lo, hi = sorted((h1, h2))
    assert window(expr, lo) == [x for x in window(expr, hi) if x < lo]


@settings(max_examples=60, deadline=None)
@given(expr=_exprs(2), h=st.integers(1, 200))
def test_contains_agrees_with_window(expr, h):
    w = set(window(expr, h))
    assert all((n in w) == contains(expr, n) for n in range(h))
