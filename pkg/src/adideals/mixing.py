"""Mixing-style properties of functions and partitions at a finite horizon.

"Mixing" is inherently relative to a declared ground family of infinite
sets, so every check here is a report of exact counts against that family,
never a boolean claim about all infinite sets.

The constructions:

* ``antimix_pair``   -- from a strictly increasing g, sets X, Y with
  x0 = 0, y0 = g(0), x_n = max{g(y_k) : k < n}, y_n = g(x_n); any injection
  trapped under g in both directions misses Y from X entirely.
* ``slalom_avoid``   -- against level-bounded families of injective partial
  functions with gaps a_{n+1} - a_n > (n+2) 2^{n+1}, picks X, Y with
  (X x Y) disjoint from every guessed function, counting arguments
  guaranteeing each step.
* ``measure_bound``  -- the exact product-measure bound
  sum 2^{-m-1} over m in n u (omega - Y), and its k-th power.
* ``nest/regroup``   -- building n-block splitting partitions from 2-block
  ones via increasing bijections onto the first part, and regrouping a
  finite-block partition by residue classes (or pair-coded rows) of indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import random

from . import partitions as parts, structure as st
from .coding import pair_encode
from .errors import DomainError, InternalCheckError
from .sets import Ap, Col, EnumImage, Fin, SetExpr, contains, window


@dataclass(frozen=True)
class FunctionWindow:
    """A finite partial function on the naturals, given by its graph."""

    graph: tuple[tuple[int, int], ...]
    injective: bool = False

    @staticmethod
    def of(pairs, injective: bool | None = None) -> "FunctionWindow":
        items = tuple(sorted(dict(pairs).items()))
        if len({k for k, _ in items}) != len(items):
            raise DomainError("a function assigns at most one value per argument")
        values = [v for _, v in items]
        inj = len(set(values)) == len(values)
        if injective is True and not inj:
            raise DomainError("injective flag set but values repeat")
        return FunctionWindow(items, inj if injective is None else injective)

    @staticmethod
    def tabulate(fn, h: int, injective: bool | None = None) -> "FunctionWindow":
        return FunctionWindow.of({n: fn(n) for n in range(h)}, injective)

    @property
    def mapping(self) -> dict[int, int]:
        return dict(self.graph)

    def __call__(self, n: int) -> int:
        m = self.mapping
        if n not in m:
            raise DomainError(f"function undefined at {n}")
        return m[n]


@dataclass(frozen=True)
class GroundFamily:
    """Finitely many symbolic infinite sets standing in for a ground model."""

    members: tuple[SetExpr, ...]

    @staticmethod
    def of(exprs, h: int = 64) -> "GroundFamily":
        exprs = tuple(exprs)
        for e in exprs:
            if len(window(e, h)) < 2:
                raise DomainError(f"ground member {e} has fewer than 2 elements below {h}")
        return GroundFamily(exprs)


def mixing_report(f: FunctionWindow, ground: GroundFamily, h: int) -> dict:
    """|f[X ∩ h] ∩ Y ∩ h| for every ordered ground pair, with the minimum."""
    m = f.mapping
    pairs = []
    for xi, X in enumerate(ground.members):
        wx = window(X, h)
        missing = [n for n in wx if n not in m]
        if missing:
            raise DomainError(f"function undefined at {missing[0]} (needed for {X})")
        image = {m[n] for n in wx}
        for yi, Y in enumerate(ground.members):
            wy = set(window(Y, h))
            count = len(image & wy)
            pairs.append({"X": str(X), "Y": str(Y), "count": count})
    return {
        "horizon": h,
        "injective": f.injective,
        "pairs": pairs,
        "min_count": min(p["count"] for p in pairs) if pairs else 0,
    }


def to_surjective(f: FunctionWindow, c: parts.Partition) -> FunctionWindow:
    """Compose with the block-index map of the partition.

    Points whose image lies outside the partition's ambient set are dropped
    from the graph (the dyadic partition does not cover 0).
    """
    out = {}
    for n, v in f.graph:
        idx = c.index_of(v)
        if idx is not None:
            out[n] = idx
    return FunctionWindow.of(out)


def fibers(f: FunctionWindow) -> tuple[list[list[int]], list[int]]:
    """Fiber prefixes f^{-1}(0), f^{-1}(1), ... plus the list of gap values."""
    values = [v for _, v in f.graph]
    if not values:
        return [], []
    top = max(values)
    fib = [[n for n, v in f.graph if v == k] for k in range(top + 1)]
    gaps = [k for k, block in enumerate(fib) if not block]
    return fib, gaps


def antimix_pair(g: FunctionWindow, k: int) -> tuple[list[int], list[int]]:
    """First k terms of the trap recursion for a strictly increasing g."""
    m = g.mapping
    keys = sorted(m)
    if any(m[a] >= m[b] for a, b in zip(keys, keys[1:])):
        raise DomainError("the bounding function must be strictly increasing")
    if k < 1:
        raise DomainError("need at least one term")

    def val(n: int) -> int:
        if n not in m:
            raise DomainError(f"bounding function undefined at {n}")
        return m[n]

    xs = [0]
    ys = [val(0)]
    for n in range(1, k):
        xs.append(max(val(y) for y in ys))
        ys.append(val(xs[-1]))
    return xs, ys


def antimix_verify(g: FunctionWindow, xs, ys, bound: int) -> dict:
    """Exhaustive check: no admissible injection sends a point of X to Y.

    A pair (x, y) is realizable by some f with f, f^{-1} pointwise under g
    iff y < g(x) and x < g(y); the report lists every realizable pair.
    """
    val = g.mapping
    hits = []
    for x in xs:
        if x >= bound:
            continue
        for y in ys:
            if y >= bound:
                continue
            if x not in val or y not in val:
                raise DomainError(f"bounding function undefined at {max(x, y)}")
            if y < val[x] and x < val[y]:
                hits.append([x, y])
    return {"bound": bound, "violations": hits, "empty_image": not hits}


@dataclass(frozen=True)
class Slalom:
    """Level-wise guesses: at most 2^n injective partial functions inside
    a_n x a_n, with a_0 > 1 and a_{n+1} - a_n > (n+2) 2^{n+1}."""

    gaps: tuple[int, ...]
    levels: tuple[tuple[tuple[tuple[int, int], ...], ...], ...]

    def __post_init__(self):
        gaps = self.gaps
        if not gaps or gaps[0] <= 1:
            raise DomainError("need a_0 > 1")
        for n in range(len(gaps) - 1):
            if gaps[n + 1] - gaps[n] <= (n + 2) * (1 << (n + 1)):
                raise DomainError(
                    f"gap rule broken at {n}: {gaps[n + 1]} - {gaps[n]} <= (n+2)2^(n+1)"
                )
        if len(self.levels) != len(gaps):
            raise DomainError("one guess list per level required")
        for n, level in enumerate(self.levels):
            if len(level) > (1 << n):
                raise DomainError(f"level {n} has {len(level)} > 2^{n} guesses")
            for fn in level:
                dom = [a for a, _ in fn]
                ran = [b for _, b in fn]
                if len(set(dom)) != len(dom) or len(set(ran)) != len(ran):
                    raise DomainError(f"level {n} guess is not an injective function")
                if any(a >= gaps[n] or b >= gaps[n] for a, b in fn):
                    raise DomainError(f"level {n} guess leaves the box {gaps[n]}^2")

    def depth(self) -> int:
        return len(self.gaps) - 1

    def functions(self, n: int) -> list[dict[int, int]]:
        return [dict(fn) for fn in self.levels[n]]

    def to_json(self) -> dict:
        return {
            "gaps": list(self.gaps),
            "levels": [[sorted(map(list, fn)) for fn in lvl] for lvl in self.levels],
        }


def minimal_gaps(depth: int, a0: int = 2) -> list[int]:
    gaps = [a0]
    for n in range(depth):
        gaps.append(gaps[-1] + (n + 2) * (1 << (n + 1)) + 1)
    return gaps


def random_slalom(depth: int, seed: int) -> Slalom:
    """A seeded slalom satisfying the invariants, for stress tests."""
    rng = random.Random(seed)
    gaps = [2 + rng.randrange(3)]
    for n in range(depth):
        gaps.append(gaps[-1] + (n + 2) * (1 << (n + 1)) + 1 + rng.randrange(8))
    levels = []
    for n in range(depth + 1):
        count = rng.randrange(1 << n) + 1 if n < 6 else rng.randrange(40)
        lvl = []
        for _ in range(min(count, 1 << n)):
            size = rng.randrange(min(gaps[n], 8))
            dom = rng.sample(range(gaps[n]), size)
            ran = rng.sample(range(gaps[n]), size)
            lvl.append(tuple(sorted(zip(dom, ran))))
        levels.append(tuple(lvl))
    return Slalom(tuple(gaps), tuple(levels))


def slalom_avoid(s: Slalom, depth: int) -> tuple[list[int], list[int], list[dict]]:
    """X, Y with (X x Y) missing every guessed function through the depth.

    Least admissible values; within a stage the second pick prefers to
    differ from the first (the proofs never need X and Y disjoint, so when
    the box leaves no fresh value the collision is reported, not an error).
    Returns (X, Y, per-stage forbidden-value records).
    """
    if depth > s.depth():
        raise DomainError(f"slalom only reaches depth {s.depth()}")
    gaps = s.gaps
    xs: list[int] = []
    ys: list[int] = []
    log: list[dict] = []
    for n in range(depth + 1):
        lo = 0 if n == 0 else gaps[n - 1]
        hi = gaps[n]
        fns = s.functions(n)
        x_pick = None
        for cand in range(lo, hi):
            images = {fn[cand] for fn in fns if cand in fn}
            if not (images & set(ys)):
                x_pick = cand
                break
        if x_pick is None:
            raise InternalCheckError(
                f"counting argument failed at level {n}: no admissible x"
            )
        forbidden = set()
        for fn in fns:
            for xk in xs + [x_pick]:
                if xk in fn:
                    forbidden.add(fn[xk])
        y_pick = None
        for cand in range(lo, hi):
            if cand in forbidden or cand == x_pick:
                continue
            y_pick = cand
            break
        if y_pick is None:
            for cand in range(lo, hi):
                if cand not in forbidden:
                    y_pick = cand
                    break
        if y_pick is None:
            raise InternalCheckError(
                f"counting argument failed at level {n}: no admissible y"
            )
        log.append(
            {
                "level": n,
                "x": x_pick,
                "y": y_pick,
                "forbidden_for_y": len(forbidden),
                "forbidden_cap": (1 << n) * (n + 1),
            }
        )
        xs.append(x_pick)
        ys.append(y_pick)
    return xs, ys, log


def slalom_check(s: Slalom, xs, ys, depth: int) -> bool:
    """(X_n x Y_n) disjoint from every guess through level n, for n <= depth."""
    for n in range(depth + 1):
        box_x, box_y = set(xs[: n + 1]), set(ys[: n + 1])
        for k in range(n + 1):
            for fn in s.functions(k):
                for a, b in fn.items():
                    if a in box_x and b in box_y:
                        return False
    return True


def measure_bound(y: SetExpr, n: int, k: int) -> tuple[Fraction, Fraction]:
    """Exact epsilon = sum 2^{-m-1} over m in n u (omega - Y), and epsilon^k.

    The complement of Y must be exactly summable (eventually periodic), else
    the request is rejected.
    """
    if n < 0 or k < 0:
        raise DomainError("n and k must be naturals")
    ep = st.ep_of(y)
    if ep is None:
        raise DomainError(f"{y} has no exactly summable complement in the vocabulary")
    eps = Fraction(0)
    for m in range(max(n, ep.cut)):
        if m < n or not ep.member(m):
            eps += Fraction(1, 1 << (m + 1))
    start = max(n, ep.cut)
    L = ep.period
    for r in range(L):
        if r in ep.residues:
            continue
        first = start + (r - start) % L
        # geometric series sum_{j >= 0} 2^{-(first + jL) - 1}
        eps += Fraction(1, 1 << (first + 1)) * Fraction(1 << L, (1 << L) - 1)
    if eps >= 1 and st.is_finite(y) is False:
        raise InternalCheckError("bound reached 1 for an infinite set")
    return eps, eps ** k


def nest(splittings, n: int) -> list[SetExpr]:
    """n-block partition from n-1 two-block ones by iterated nesting.

    One step: given the current tuple T and the next pair (Q0, Q1), map T
    through the increasing bijection onto Q0 and append Q1.
    """
    splittings = [tuple(p) for p in splittings]
    if n < 2 or len(splittings) != n - 1:
        raise DomainError(f"nesting into {n} blocks needs exactly {n - 1} two-block partitions")
    for p in splittings:
        if len(p) != 2:
            raise DomainError("each splitting must have exactly two blocks")
        for part in p:
            if st.is_finite(part) is not False:
                raise DomainError(f"splitting part {part} is not provably infinite")
    current = list(splittings[0])
    for q0, q1 in splittings[1:]:
        current = [EnumImage(t, q0) for t in current] + [q1]
    return [st.simplify(t) for t in current]


def regroup(p: parts.Partition, classes) -> list[SetExpr]:
    """Union the blocks of p by index residue classes (or pair-coded rows).

    classes = an integer >= 2 gives that many parts; classes = "mix" gives
    the infinite regrouping Y_k = union of blocks with index in row k of the
    pair coding (materialize the first K via the returned callable).
    """
    if classes == "mix":
        def row(k: int) -> SetExpr:
            return st.simplify(parts.sets.Blowup(Col(k), p))

        return [row(k) for k in range(8)]
    classes = int(classes)
    if classes < 2:
        raise DomainError("regrouping needs at least 2 classes")
    return [st.simplify(parts.sets.Blowup(Ap(k, classes), p)) for k in range(classes)]


def splitting_report(blocks, ground: GroundFamily, h: int) -> dict:
    """|X ∩ Y_k ∩ h| for every ground X and every part Y_k."""
    rows = []
    for X in ground.members:
        wx = set(window(X, h))
        for k, Y in enumerate(blocks):
            if isinstance(Y, SetExpr):
                wy = set(window(Y, h))
            else:
                wy = {v for v in Y if v < h}
            rows.append({"X": str(X), "k": k, "count": len(wx & wy)})
    return {
        "horizon": h,
        "cells": rows,
        "min_count": min(r["count"] for r in rows) if rows else 0,
    }
