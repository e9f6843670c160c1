"""The computable random graph on the naturals via the BIT predicate.

Vertices are naturals; {m < n} is an edge iff bit m of n is set.  This
realizes the extension property: for disjoint finite A, B there is a vertex
adjacent to everything in A and nothing in B, and we can write one down.
"""

from __future__ import annotations

from .errors import DomainError, InternalCheckError

# A clique v0 < v1 < ... forces v_{i+1} >= 2^{v_i} (the v_i-th bit must be
# set), so clique elements grow as a tower; beyond 5 the values no longer
# fit in memory.
MAX_CLIQUE = 5


def rado_edge(m: int, n: int) -> bool:
    """Edge test for the unordered pair {m, n}."""
    if m == n:
        raise DomainError("the BIT graph has no loops")
    if m < 0 or n < 0:
        raise DomainError("vertices are naturals")
    lo, hi = (m, n) if m < n else (n, m)
    return (hi >> lo) & 1 == 1


def rado_witness(a_side, b_side) -> int:
    """A vertex adjacent to all of ``a_side`` and none of ``b_side``.

    Takes sum(2^a for a in A), plus a single high bit when that value fails
    to clear A u B; the result is verified against both sides before return.
    """
    a_set, b_set = frozenset(a_side), frozenset(b_side)
    if a_set & b_set:
        raise DomainError(f"sides must be disjoint, both contain {sorted(a_set & b_set)}")
    if any(x < 0 for x in a_set | b_set):
        raise DomainError("vertices are naturals")
    n = sum(1 << a for a in a_set)
    both = a_set | b_set
    if not both:
        return 1  # anything outside the empty sides works
    if n <= max(both):
        n += 1 << (max(both) + 1)
    for a in a_set:
        if not rado_edge(a, n):
            raise InternalCheckError(f"witness {n} misses required edge to {a}")
    for b in b_set:
        if rado_edge(b, n):
            raise InternalCheckError(f"witness {n} has forbidden edge to {b}")
    if n in both:
        raise InternalCheckError(f"witness {n} lies inside the sides")
    return n


def is_homogeneous(vertices, kind: str) -> tuple[bool, tuple[int, int] | None]:
    """Exhaustive check; returns (ok, violating pair or None)."""
    vs = sorted(vertices)
    want = kind == "clique"
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            if rado_edge(vs[i], vs[j]) != want:
                return False, (vs[i], vs[j])
    return True, None


def rado_homogeneous(kind: str, n: int) -> list[int]:
    """Greedy homogeneous set of the requested kind and size.

    Cliques extend by the least vertex whose bits cover the current set
    (exactly sum(2^v)); independents scan single-bit vertices.  The output
    is re-verified exhaustively before return.
    """
    if kind not in ("clique", "independent"):
        raise DomainError(f"kind must be clique or independent, got {kind!r}")
    if n < 1:
        raise DomainError("size must be at least 1")
    if kind == "clique":
        if n > MAX_CLIQUE:
            raise DomainError(
                f"clique sizes beyond {MAX_CLIQUE} need tower-of-exponents vertices"
            )
        out = [2]
        while len(out) < n:
            out.append(sum(1 << v for v in out))
    else:
        out = []
        t = 0
        while len(out) < n:
            v = 1 << t
            if v not in out and all(not rado_edge(u, v) for u in out):
                out.append(v)
            t += 1
    ok, bad = is_homogeneous(out, kind)
    if not ok:
        raise InternalCheckError(f"greedy {kind} failed homogeneity at pair {bad}")
    return out
