"""Partition witnesses for meager ideals and the machinery built on them.

A witness partition for an ideal has the property that no member of the
ideal contains infinitely many full blocks.  Witness constructions (one
line of proof each):

* Fin -- singletons: a finite set contains finitely many of them.
* density-type, dyadic blocks -- a full block [2^n, 2^{n+1}) forces
  |A ∩ 2^{n+1}| >= 2^n, density >= 1/2 at that horizon.
* summable -- greedy blocks of weight >= 1: infinitely many full blocks give
  infinite mass.
* EDfin -- full columns of the triangle: infinitely many full columns give
  unbounded column sizes.
* Fin x Fin -- L-shaped shells: infinitely many full shells make every
  column infinite.
* van der Waerden -- the triangular intervals [T(n), T(n+1)): a full block
  is an (n+1)-term progression of consecutive integers.

Restrictions to a positive set Y take the trace of a geometric scale on Y
(density case), greedy mass blocks along Y (summable), singleton chunks
(Fin), or pigeonhole-sized chunks of Y's residue classes (W over an
eventually periodic Y).
"""

from __future__ import annotations

from fractions import Fraction

from . import catalog, partitions as parts, structure as st
from .catalog import IdealHandle, member
from .errors import DomainError, InternalCheckError, WindowError
from .sets import Blowup, Branch, SetExpr, contains, window


def talagrand_witness(handle: IdealHandle) -> parts.Partition:
    """A partition no ideal member fully hits infinitely often."""
    root = handle.base or handle
    if handle.family == "restrict":
        return _restricted_witness(root, handle.index_set)
    fam = root.family
    if fam == "fin":
        return parts.width(1)
    if fam == "density":
        return root.partition
    if fam == "summable":
        return parts.mass_chunks(parts.sets.OMEGA, root.weight, Fraction(1),
                                 name=f"(mass-chunks omega {root.weight.describe()})")
    if fam == "edfin":
        return parts.DiagColumns()
    if fam == "finxfin":
        return parts.PairTriangles()
    if fam == "w":
        return parts.triangular()
    raise DomainError(f"no witness construction for {handle.name}")


def _restricted_witness(root: IdealHandle, y: SetExpr) -> parts.Partition:
    fam = root.family
    if fam == "fin":
        return parts.ChunkPartition(y, lambda n: 1, f"(singletons {y})")
    if fam == "density":
        if st.lower_density(y) in (None, Fraction(0)):
            raise DomainError(
                f"restricted witness needs a set of provably positive density, got {y}"
            )
        return parts.dyadic_trace(y)
    if fam == "summable":
        return parts.mass_chunks(y, root.weight, Fraction(1),
                                 name=f"(mass-chunks {y} {root.weight.describe()})")
    if fam == "w":
        ep = st.ep_of(y)
        if ep is None or ep.finite:
            raise DomainError(f"W restricted witness needs an eventually periodic set, got {y}")
        # a run of |head| + |R|(n+2) consecutive elements of Y holds n+2
        # consecutive members of one residue class: an (n+2)-term progression
        head, r = len(ep.head), len(ep.residues)
        return parts.ChunkPartition(
            y, lambda n: head + r * (n + 2), f"(progression-chunks {y})"
        )
    raise DomainError(f"no restricted witness construction for {root.name}")


def block_contained(s: SetExpr, p: parts.Partition, idx: int) -> bool:
    """Exact full-block containment, by counting when blocks are huge."""
    lo, hi = p.block_bounds(idx)
    size = p.block_size(idx)
    if p.style == "interval":
        c = st.count_in_range(s, lo, hi + 1)
        if c is not None:
            return c == size
    elif p.style == "tracechunk":
        c = st.count_in_range(st.simplify(parts.sets.Inter(p.ambient, s)), lo, hi + 1)
        if c is not None:
            return c == size
    return all(contains(s, x) for x in p.block(idx))


def verify_talagrand(p: parts.Partition, handle: IdealHandle, samples, h: int) -> dict:
    """Count fully contained blocks among the first h, per In-decided sample."""
    if h < 2:
        raise DomainError("need at least two blocks to report growth")
    rows = []
    for s in samples:
        s = st.simplify(s)
        v = member(handle, s)
        if not v.is_in:
            rows.append({"set": str(s), "skipped": f"verdict {v.answer}, not In"})
            continue
        contained = [i for i in range(h) if block_contained(s, p, i)]
        half = sum(1 for i in contained if i < h // 2)
        rows.append(
            {
                "set": str(s),
                "contained_blocks": len(contained),
                "largest_contained_index": contained[-1] if contained else None,
                "grows_late": len(contained) > half,
            }
        )
    return {"partition": str(p), "ideal": handle.name, "blocks": h, "samples": rows}


def _first_block_from(p: parts.Partition, cut: int, cursor: int) -> tuple[int, int, int]:
    """Least block index >= cursor whose block lies inside [cut, inf)."""
    n = cursor
    while True:
        lo, hi = p.block_bounds(n)
        if lo >= cut:
            return n, lo, hi
        n += 1
        if n - cursor > 1 << 20:
            raise DomainError("input partition enumerates too slowly")


def dominate(ps) -> parts.IntervalPartition:
    """An interval partition each of whose blocks absorbs one full fresh block
    of every input (containment for every block index, not just cofinitely)."""
    ps = list(ps)
    if not ps:
        raise DomainError("dominate needs at least one partition")
    bounds = [0]
    cursors = [0] * len(ps)

    def boundary(n: int) -> int:
        while len(bounds) <= n:
            cut = bounds[-1]
            nxt = cut + 1
            for i, p in enumerate(ps):
                idx, _lo, hi = _first_block_from(p, cut, cursors[i])
                cursors[i] = idx
                nxt = max(nxt, hi + 1)
            bounds.append(nxt)
        return bounds[n]

    names = ", ".join(str(p) for p in ps)
    return parts.IntervalPartition(boundary, f"(dominate {names})")


def dominate_report(r: parts.Partition, ps, upto: int) -> list[dict]:
    """Containment witnesses: for each input and each m < upto, a block index
    n with P_n inside R_m."""
    out = []
    for p in ps:
        cursor = 0
        for m in range(upto):
            rlo, rhi = r.block_bounds(m)
            idx, lo, hi = _first_block_from(p, rlo, cursor)
            if hi > rhi:
                raise InternalCheckError(
                    f"block {idx} of {p} sticks out of block {m} of the dominating partition"
                )
            cursor = idx
            out.append({"input_partition": str(p), "m": m, "witness_n": idx})
    return out


def _min_outside(p: parts.Partition, code: int, avoid: SetExpr, start: int) -> int | None:
    """Least element of block `code` that is >= start and outside `avoid`."""
    try:
        lo, hi = p.block_bounds(code)
    except DomainError:
        return None
    if p.style == "interval":
        in_block = lambda x: True
    elif p.style == "tracechunk":
        in_block = lambda x: contains(p.ambient, x)
    else:
        in_block = lambda x: p.index_of(x) == code
    x = max(lo, start)
    steps = 0
    while x <= hi:
        if in_block(x) and not contains(avoid, x):
            return x
        x += 1
        steps += 1
        if steps > 1 << 20:
            return None
    return None


def hitting_partition(family, b: SetExpr, h: int, handle: IdealHandle | None = None,
                      max_depth: int = 18, start: int = 0) -> list[tuple[int, int]]:
    """Interval blocks [lo, hi) each met by every branch blow-up outside b.

    The compactness argument becomes a frontier search: a set of words such
    that every branch extends one of them certifies all branches at once; a
    word whose prefix blow-up misses the block outside b is split into its
    two children, which adds deeper (hence fresh) partition blocks.  When b
    is decided In this terminates because only finitely many blocks sit
    inside b (the witness property); a failure therefore signals a bug and
    raises.
    """
    base = getattr(family, "base", family)
    if handle is not None:
        v = member(handle, b)
        if not v.is_in:
            raise DomainError(f"avoided set must be decided In, got {v.answer}")
    blocks: list[tuple[int, int]] = []
    lo = start
    for _ in range(h):
        frontier: list[str] = [""]
        needed = lo + 1
        satisfied: list[str] = []
        while frontier:
            word = frontier.pop()
            hit = None
            for i in range(len(word) + 1):
                code = parts.sets.coding.binseq_encode(word[:i])
                found = _min_outside(base, code, b, lo)
                if found is not None and (hit is None or found < hit):
                    hit = found
            if hit is None:
                if len(word) >= max_depth:
                    raise InternalCheckError(
                        f"hitting search exhausted at depth {max_depth} "
                        f"(block start {lo}); the avoided set swallows every branch"
                    )
                frontier.extend((word + "0", word + "1"))
            else:
                needed = max(needed, hit + 1)
                satisfied.append(word)
        blocks.append((lo, needed))
        lo = needed
    return blocks
