"""Canonical computable bijections between the naturals and structured index sets.

Every ideal on a structured countable set (pairs, unordered pairs, finite
binary/natural sequences, rationals) is handled through one of these pinned
codings, so "subset of the index set" always means "subset of the naturals"
after transport.

Pinned choices:

* ``pair``       -- Cantor pairing  pi(m, n) = (m+n)(m+n+1)/2 + n.
* ``upair``      -- {m < n} coded as pi(m, n-m-1).
* ``binseq``     -- length-lex on binary words: code(s) = 2^|s| - 1 + value2(s).
* ``natseq``     -- () -> 0; a word of length m >= 1 is coded as
                    1 + pi(m-1, tuple_code(word)) with tuple_code the
                    left-folded Cantor pairing.
* ``rational01`` -- reduced fractions in [0,1], ascending denominator then
                    ascending numerator: 0, 1, 1/2, 1/3, 2/3, 1/4, 3/4, ...
* ``rational``   -- all reduced fractions, ascending height max(|p|, q),
                    within a height by denominator then numerator.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

from .errors import DomainError

CODINGS = ("pair", "upair", "binseq", "natseq", "rational01", "rational")


def pair_encode(m: int, n: int) -> int:
    if m < 0 or n < 0:
        raise DomainError(f"pair coding needs naturals, got ({m}, {n})")
    s = m + n
    return s * (s + 1) // 2 + n


def pair_decode(code: int) -> tuple[int, int]:
    if code < 0:
        raise DomainError(f"natural expected, got {code}")
    # largest s with s(s+1)/2 <= code
    s = (isqrt(8 * code + 1) - 1) // 2
    t = s * (s + 1) // 2
    n = code - t
    return s - n, n


def upair_encode(m: int, n: int) -> int:
    if m == n:
        raise DomainError(f"unordered pair needs distinct elements, got {{{m}, {n}}}")
    m, n = min(m, n), max(m, n)
    return pair_encode(m, n - m - 1)


def upair_decode(code: int) -> tuple[int, int]:
    m, d = pair_decode(code)
    return m, m + d + 1


def binseq_encode(word: str) -> int:
    if any(c not in "01" for c in word):
        raise DomainError(f"binary word expected, got {word!r}")
    if word == "":
        return 0
    return (1 << len(word)) - 1 + int(word, 2)


def binseq_decode(code: int) -> str:
    if code < 0:
        raise DomainError(f"natural expected, got {code}")
    length = (code + 1).bit_length() - 1
    if length == 0:
        return ""
    value = code - ((1 << length) - 1)
    return format(value, "b").zfill(length)


def _tuple_encode(word: tuple[int, ...]) -> int:
    acc = word[0]
    for x in word[1:]:
        acc = pair_encode(acc, x)
    return acc


def _tuple_decode(code: int, length: int) -> tuple[int, ...]:
    parts: list[int] = []
    for _ in range(length - 1):
        code, x = pair_decode(code)
        parts.append(x)
    parts.append(code)
    return tuple(reversed(parts))


def natseq_encode(word: tuple[int, ...]) -> int:
    if any((not isinstance(x, int)) or x < 0 for x in word):
        raise DomainError(f"sequence of naturals expected, got {word}")
    if len(word) == 0:
        return 0
    return 1 + pair_encode(len(word) - 1, _tuple_encode(tuple(word)))


def natseq_decode(code: int) -> tuple[int, ...]:
    if code < 0:
        raise DomainError(f"natural expected, got {code}")
    if code == 0:
        return ()
    lm1, t = pair_decode(code - 1)
    return _tuple_decode(t, lm1 + 1)


def _totient(d: int) -> int:
    return sum(1 for k in range(1, d) if gcd(k, d) == 1)


def rational01_encode(q: Fraction) -> int:
    q = _as_fraction(q)
    if q < 0 or q > 1:
        raise DomainError(f"rational in [0,1] expected, got {q}")
    if q == 0:
        return 0
    if q == 1:
        return 1
    d = q.denominator
    base = 2 + sum(_totient(dd) for dd in range(2, d))
    offset = sum(1 for k in range(1, q.numerator) if gcd(k, d) == 1)
    return base + offset


def rational01_decode(code: int) -> Fraction:
    if code < 0:
        raise DomainError(f"natural expected, got {code}")
    if code == 0:
        return Fraction(0)
    if code == 1:
        return Fraction(1)
    code -= 2
    d = 2
    while True:
        t = _totient(d)
        if code < t:
            for k in range(1, d):
                if gcd(k, d) == 1:
                    if code == 0:
                        return Fraction(k, d)
                    code -= 1
        code -= t
        d += 1


def _height_block(h: int) -> list[Fraction]:
    """All reduced p/q with max(|p|, q) == h, by denominator then numerator."""
    out = []
    for q in range(1, h + 1):
        for p in range(-h, h + 1):
            if max(abs(p), q) == h and gcd(abs(p), q) == 1:
                out.append(Fraction(p, q))
    return out


def rational_encode(x: Fraction) -> int:
    x = _as_fraction(x)
    h = max(abs(x.numerator), x.denominator)
    code = 0
    for hh in range(1, h):
        code += len(_height_block(hh))
    block = _height_block(h)
    return code + block.index(x)


def rational_decode(code: int) -> Fraction:
    if code < 0:
        raise DomainError(f"natural expected, got {code}")
    h = 1
    while True:
        block = _height_block(h)
        if code < len(block):
            return block[code]
        code -= len(block)
        h += 1


def _as_fraction(q) -> Fraction:
    if isinstance(q, Fraction):
        return q
    if isinstance(q, int):
        return Fraction(q)
    if isinstance(q, tuple) and len(q) == 2:
        p, d = q
        if d <= 0:
            raise DomainError(f"positive denominator required, got {q}")
        if gcd(abs(p), d) != 1:
            raise DomainError(f"fraction {p}/{d} is not reduced")
        return Fraction(p, d)
    raise DomainError(f"rational expected, got {q!r}")


_ENCODERS = {
    "pair": lambda obj: pair_encode(*obj),
    "upair": lambda obj: upair_encode(*sorted(obj)),
    "binseq": binseq_encode,
    "natseq": lambda obj: natseq_encode(tuple(obj)),
    "rational01": rational01_encode,
    "rational": rational_encode,
}

_DECODERS = {
    "pair": pair_decode,
    "upair": upair_decode,
    "binseq": binseq_decode,
    "natseq": natseq_decode,
    "rational01": rational01_decode,
    "rational": rational_decode,
}


def encode(kind: str, obj) -> int:
    """Code an object of the given kind as a natural number."""
    if kind not in _ENCODERS:
        raise DomainError(f"unknown coding {kind!r}; expected one of {CODINGS}")
    return _ENCODERS[kind](obj)


def decode(kind: str, code: int):
    """Inverse of :func:`encode`; total on the naturals for every kind."""
    if kind not in _DECODERS:
        raise DomainError(f"unknown coding {kind!r}; expected one of {CODINGS}")
    return _DECODERS[kind](code)
