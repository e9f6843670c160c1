"""Partitions of an infinite set into nonempty finite blocks, in order.

Three styles cover everything the constructions need:

* ``IntervalPartition`` -- blocks [b_n, b_{n+1}) for strictly increasing
  boundaries given by a closed form or a lazily memoized rule;
* ``ChunkPartition``   -- consecutive runs along the increasing enumeration
  of an ambient SetExpr, with prescribed run lengths (used for witnesses of
  restricted ideals);
* ``BlockRulePartition`` -- named non-interval block systems under the pair
  coding (columns of the triangle, L-shaped triangles of omega x omega).

Blocks can be astronomically large (the dyadic partition reaches 2^n-sized
blocks); ``block_size``/``block_bounds`` stay cheap and materialization is
guarded.  Partitions hash by identity and are immutable once built apart
from internal memo tables, so they can sit inside frozen SetExprs.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

from . import sets
from .coding import pair_encode, pair_decode
from .errors import DomainError

_MATERIALIZE_CAP = 1 << 22


def _tri(n: int) -> int:
    return n * (n + 1) // 2


class Partition:
    style = "abstract"
    growth: str | None = None          # "geometric" when block spans grow by a ratio > 1
    min_mass: Fraction | None = None   # lower bound on per-block weight, when known

    @property
    def ambient(self) -> sets.SetExpr:
        raise NotImplementedError

    def block_size(self, n: int) -> int:
        raise NotImplementedError

    def block_bounds(self, n: int) -> tuple[int, int]:
        """(min element, max element) of block n, without materializing it."""
        raise NotImplementedError

    def block(self, n: int) -> list[int]:
        raise NotImplementedError

    def blocks(self, n: int) -> list[list[int]]:
        """The first n blocks."""
        if n < 1:
            raise DomainError("need at least one block")
        return [self.block(i) for i in range(n)]

    def index_of(self, m: int) -> int | None:
        raise NotImplementedError

    def blocks_below(self, h: int):
        """Yield (index, block) for every block meeting [0, h)."""
        n = 0
        while True:
            lo, _ = self.block_bounds(n)
            if lo >= h:
                return
            yield n, self.block(n)
            n += 1

    def __hash__(self):
        return object.__hash__(self)

    def __eq__(self, other):
        return self is other


class IntervalPartition(Partition):
    style = "interval"

    def __init__(self, boundary: Callable[[int], int], name: str,
                 growth: str | None = None, min_mass: Fraction | None = None):
        self._boundary = boundary
        self._name = name
        self.growth = growth
        self.min_mass = min_mass
        self._memo: dict[int, int] = {}

    def boundary(self, n: int) -> int:
        b = self._memo.get(n)
        if b is None:
            b = self._boundary(n)
            prev = self._memo.get(n - 1)
            if n > 0 and prev is not None and b <= prev:
                raise DomainError(f"boundaries must increase strictly, got b_{n}={b}")
            self._memo[n] = b
        return b

    @property
    def ambient(self) -> sets.SetExpr:
        start = self.boundary(0)
        return sets.OMEGA if start == 0 else sets.Ap(start, 1)

    def block_size(self, n):
        return self.boundary(n + 1) - self.boundary(n)

    def block_bounds(self, n):
        return self.boundary(n), self.boundary(n + 1) - 1

    def block(self, n):
        lo, hi = self.boundary(n), self.boundary(n + 1)
        if hi - lo > _MATERIALIZE_CAP:
            raise DomainError(f"block {n} has {hi - lo} elements; too large to list")
        return list(range(lo, hi))

    def index_of(self, m):
        if m < self.boundary(0):
            return None
        n = 1
        while self.boundary(n) <= m:
            n *= 2
        lo, hi = n // 2, n
        while lo + 1 < hi:
            mid = (lo + hi) // 2
            if self.boundary(mid) <= m:
                lo = mid
            else:
                hi = mid
        return lo

    def __str__(self):
        return self._name


def dyadic() -> IntervalPartition:
    """Blocks [2^n, 2^{n+1}); covers the naturals from 1 on."""
    return IntervalPartition(lambda n: 1 << n, "dyadic", growth="geometric")


def width(w: int, start: int = 0) -> IntervalPartition:
    if w < 1:
        raise DomainError("width must be at least 1")
    name = f"(width {w})" if start == 0 else f"(width {w} {start})"
    return IntervalPartition(lambda n: start + w * n, name)


def triangular() -> IntervalPartition:
    """Blocks [T(n), T(n+1)) of size n+1; block n holds an (n+1)-term run."""
    return IntervalPartition(_tri, "triangular")


def from_boundaries(bounds: list[int], tail: int | None = None) -> IntervalPartition:
    bounds = list(bounds)
    if len(bounds) < 2 or any(b >= c for b, c in zip(bounds, bounds[1:])):
        raise DomainError("need at least two strictly increasing boundaries")
    if tail is None:
        tail = bounds[-1] - bounds[-2]

    def boundary(n, _b=tuple(bounds), _t=tail):
        return _b[n] if n < len(_b) else _b[-1] + _t * (n - len(_b) + 1)

    name = "(boundaries " + " ".join(map(str, bounds)) + f" tail {tail})"
    return IntervalPartition(boundary, name)


def explicit_prefix(prefix_blocks: list[list[int]], tail: int) -> "BlockRulePartition":
    """Explicit finite blocks covering an initial segment, then width-`tail` intervals."""
    blocks = [sorted(set(b)) for b in prefix_blocks]
    if any(not b for b in blocks):
        raise DomainError("blocks must be nonempty")
    flat = sorted(x for b in blocks for x in b)
    start = len(flat)
    if flat != list(range(start)):
        raise DomainError("prefix blocks must tile an initial segment of the naturals")
    if tail < 1:
        raise DomainError("tail width must be at least 1")
    return _ExplicitPrefix(blocks, start, tail)


class BlockRulePartition(Partition):
    style = "blockrule"


class _ExplicitPrefix(BlockRulePartition):
    def __init__(self, blocks, start, tail):
        self._blocks = blocks
        self._start = start
        self._tail = tail

    @property
    def ambient(self):
        return sets.OMEGA

    def block_size(self, n):
        k = len(self._blocks)
        return len(self._blocks[n]) if n < k else self._tail

    def block_bounds(self, n):
        k = len(self._blocks)
        if n < k:
            return self._blocks[n][0], self._blocks[n][-1]
        lo = self._start + self._tail * (n - k)
        return lo, lo + self._tail - 1

    def block(self, n):
        k = len(self._blocks)
        if n < k:
            return list(self._blocks[n])
        lo = self._start + self._tail * (n - k)
        return list(range(lo, lo + self._tail))

    def index_of(self, m):
        if m < 0:
            return None
        if m < self._start:
            for i, b in enumerate(self._blocks):
                if m in b:
                    return i
        return len(self._blocks) + (m - self._start) // self._tail

    def __str__(self):
        shown = " ".join("(" + " ".join(map(str, b)) + ")" for b in self._blocks)
        return f"(explicit {shown} tail {self._tail})"


class DiagColumns(BlockRulePartition):
    """Columns {(n, k) : k <= n} of the triangle, under the pair coding."""

    @property
    def ambient(self):
        return sets.Diag()

    def block_size(self, n):
        return n + 1

    def block_bounds(self, n):
        return pair_encode(n, 0), max(pair_encode(n, k) for k in range(n + 1))

    def block(self, n):
        return sorted(pair_encode(n, k) for k in range(n + 1))

    def index_of(self, m):
        a, b = pair_decode(m)
        return a if b <= a else None

    def __str__(self):
        return "diag-cols"


class PairTriangles(BlockRulePartition):
    """L-shaped shells {(i, j) : max(i, j) = n} of omega x omega, pair-coded."""

    @property
    def ambient(self):
        return sets.OMEGA

    def block_size(self, n):
        return 2 * n + 1

    def block_bounds(self, n):
        return pair_encode(n, 0), pair_encode(n, n)

    def block(self, n):
        cells = [pair_encode(n, j) for j in range(n + 1)]
        cells += [pair_encode(i, n) for i in range(n)]
        return sorted(cells)

    def index_of(self, m):
        a, b = pair_decode(m)
        return max(a, b)

    def __str__(self):
        return "pair-triangles"


class ChunkPartition(Partition):
    """Consecutive runs of the ambient set's enumeration with given lengths."""

    style = "chunk"

    def __init__(self, ambient: sets.SetExpr, counts: Callable[[int], int], name: str,
                 growth: str | None = None, min_mass: Fraction | None = None):
        self._ambient = ambient
        self._counts = counts
        self._name = name
        self.growth = growth
        self.min_mass = min_mass
        self._rank_bounds = [0]
        self._values: list[int] = []
        self._value_horizon = 0

    @property
    def ambient(self):
        return self._ambient

    def _rank_bound(self, n: int) -> int:
        while len(self._rank_bounds) <= n:
            k = len(self._rank_bounds) - 1
            c = self._counts(k)
            if c < 1:
                raise DomainError(f"chunk {k} would be empty")
            self._rank_bounds.append(self._rank_bounds[-1] + c)
        return self._rank_bounds[n]

    def _values_upto_rank(self, r: int) -> list[int]:
        h = max(self._value_horizon, 16)
        while len(self._values) < r:
            h *= 2
            if h > 1 << 40:
                raise DomainError("ambient set enumerates too slowly to chunk")
            self._values = sets.window(self._ambient, h)
            self._value_horizon = h
        return self._values

    def block_size(self, n):
        return self._rank_bound(n + 1) - self._rank_bound(n)

    def block_bounds(self, n):
        lo, hi = self._rank_bound(n), self._rank_bound(n + 1)
        vals = self._values_upto_rank(hi)
        return vals[lo], vals[hi - 1]

    def block(self, n):
        lo, hi = self._rank_bound(n), self._rank_bound(n + 1)
        if hi - lo > _MATERIALIZE_CAP:
            raise DomainError(f"chunk {n} too large to list")
        return self._values_upto_rank(hi)[lo:hi]

    def index_of(self, m):
        if not sets.contains(self._ambient, m):
            return None
        vals = self._values_upto_rank(1)
        while not vals or vals[-1] < m:
            vals = self._values_upto_rank(2 * max(len(vals), 8))
        from bisect import bisect_left

        rank = bisect_left(vals, m)
        n = 0
        while self._rank_bound(n + 1) <= rank:
            n += 1
        return n

    def __str__(self):
        return self._name


def geometric_chunks(ambient: sets.SetExpr, name: str | None = None) -> ChunkPartition:
    """Runs of 1, 2, 4, 8, ... consecutive ambient elements."""
    return ChunkPartition(
        ambient,
        lambda n: 1 << n,
        name or f"(chunks {ambient} geometric)",
        growth="geometric",
    )


def mass_chunks(ambient: sets.SetExpr, weight, threshold: Fraction = Fraction(1),
                name: str | None = None) -> ChunkPartition:
    """Shortest consecutive runs whose total weight reaches the threshold.

    ``weight`` maps a natural to a nonnegative Fraction; the ambient set must
    carry divergent total weight or chunking eventually fails with an error.
    """
    part = ChunkPartition.__new__(ChunkPartition)
    ChunkPartition.__init__(
        part, ambient, lambda n: 0, name or f"(mass-chunks {ambient})",
        growth="geometric", min_mass=threshold,
    )

    def counts(_n: int) -> int:
        start = part._rank_bounds[-1]
        total = Fraction(0)
        k = 0
        while total < threshold:
            vals = part._values_upto_rank(start + k + 1)
            total += weight(vals[start + k])
            k += 1
            if k > _MATERIALIZE_CAP:
                raise DomainError("weight mass accumulates too slowly")
        return k

    part._counts = counts
    return part


class TraceIntervals(Partition):
    """Blocks Y ∩ [B_k, B_{k+1}) for interval boundaries, empty cuts skipped.

    The restricted witness of choice for density-type ideals: full blocks of
    the trace force positive relative density along a geometric scale, and
    everything (sizes, bounds, membership) is computable by counting, never
    by materializing ranks.
    """

    style = "tracechunk"

    def __init__(self, ambient: sets.SetExpr, boundary: Callable[[int], int],
                 name: str, growth: str | None = "geometric"):
        from . import structure as st

        if st.count_in_range(ambient, 0, 1) is None:
            raise DomainError(f"{ambient} is not exactly countable; cannot trace intervals on it")
        self._ambient = ambient
        self._boundary = boundary
        self._name = name
        self.growth = growth
        self._kept: list[int] = []   # raw interval indices with nonempty trace
        self._scan = 0

    @property
    def ambient(self):
        return self._ambient

    def _count(self, lo: int, hi: int) -> int:
        from . import structure as st

        c = st.count_in_range(self._ambient, lo, hi)
        if c is None:
            raise DomainError("ambient stopped being countable")
        return c

    def _raw(self, n: int) -> int:
        while len(self._kept) <= n:
            k = self._scan
            if k > 1 << 20:
                raise DomainError("trace partition ran out of nonempty cuts")
            if self._count(self._boundary(k), self._boundary(k + 1)) > 0:
                self._kept.append(k)
            self._scan = k + 1
        return self._kept[n]

    def block_size(self, n):
        k = self._raw(n)
        return self._count(self._boundary(k), self._boundary(k + 1))

    def block_bounds(self, n):
        k = self._raw(n)
        lo, hi = self._boundary(k), self._boundary(k + 1)
        first = lo
        while not sets.contains(self._ambient, first):
            first += 1
        last = hi - 1
        while not sets.contains(self._ambient, last):
            last -= 1
        return first, last

    def block(self, n):
        k = self._raw(n)
        lo, hi = self._boundary(k), self._boundary(k + 1)
        if self.block_size(n) > _MATERIALIZE_CAP or hi - lo > 64 * _MATERIALIZE_CAP:
            raise DomainError(f"trace block {n} too large to list")
        return [x for x in range(lo, hi) if sets.contains(self._ambient, x)]

    def index_of(self, m):
        if not sets.contains(self._ambient, m):
            return None
        k = 0
        while self._boundary(k + 1) <= m:
            k += 1
        n = 0
        while True:
            raw = self._raw(n)
            if raw == k:
                return n
            if raw > k:
                return None  # m sat in an empty cut: impossible by construction
            n += 1

    def __str__(self):
        return self._name


def dyadic_trace(ambient: sets.SetExpr) -> TraceIntervals:
    return TraceIntervals(ambient, lambda k: 1 << k, f"(dyadic-trace {ambient})")
