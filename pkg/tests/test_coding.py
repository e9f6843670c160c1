"""Round-trip and pinned-value tests for the codings."""

from fractions import Fraction
from itertools import product

import pytest

from adideals import coding
from adideals.errors import DomainError


def test_pair_pinned_values():
    # forced by the pairing formula (m+n)(m+n+1)/2 + n
    assert coding.encode("pair", (0, 0)) == 0
    assert coding.encode("pair", (1, 2)) == 8
    assert coding.decode("pair", 8) == (1, 2)


def test_binseq_pinned_values():
    # forced by length-lex: 2^|s| - 1 + value
    assert coding.encode("binseq", "101") == 12
    assert coding.encode("binseq", "") == 0
    assert coding.decode("binseq", 12) == "101"


def test_rational01_enumeration_prefix():
    want = [Fraction(0), Fraction(1), Fraction(1, 2), Fraction(1, 3),
            Fraction(2, 3), Fraction(1, 4), Fraction(3, 4), Fraction(1, 5)]
    assert [coding.decode("rational01", i) for i in range(8)] == want


def test_roundtrip_objects_up_to_size_12():
    for m, n in product(range(13), repeat=2):
        assert coding.decode("pair", coding.encode("pair", (m, n))) == (m, n)
        if m != n:
            got = coding.decode("upair", coding.encode("upair", (m, n)))
            assert got == (min(m, n), max(m, n))
    for length in range(13):
        for value in range(min(1 << length, 256)):
            word = format(value, "b").zfill(length) if length else ""
            assert coding.decode("binseq", coding.encode("binseq", word)) == word
    seqs = [()] + [tuple(t) for r in range(1, 4) for t in product(range(5), repeat=r)]
    for t in seqs:
        assert coding.decode("natseq", coding.encode("natseq", t)) == t
    for den in range(1, 13):
        for num in range(den + 1):
            q = Fraction(num, den)
            assert coding.decode("rational01", coding.encode("rational01", q)) == q
            assert coding.decode("rational", coding.encode("rational", q)) == q
            assert coding.decode("rational", coding.encode("rational", -q)) == -q


@pytest.mark.parametrize("kind", coding.CODINGS)
def test_roundtrip_naturals_below_1000(kind):
    for code in range(1000):
        assert coding.encode(kind, coding.decode(kind, code)) == code


def test_malformed_objects_rejected():
    with pytest.raises(DomainError):
        coding.encode("upair", (3, 3))
    with pytest.raises(DomainError):
        coding.encode("binseq", "102")
    with pytest.raises(DomainError):
        coding.encode("rational01", (2, 4))  # not reduced
    with pytest.raises(DomainError):
        coding.encode("rational01", Fraction(3, 2))  # outside [0,1]
    with pytest.raises(DomainError):
        coding.encode("natseq", (1, -2))
