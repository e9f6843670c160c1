"""Finite shadows of each ideal's defining quantity on a window.

Diagnostics never claim membership; they report the per-ideal statistic on
window(s, h) so Unknown verdicts still come with evidence a human can read.
Rationals are exact and serialized as "p/q" strings by the CLI.
"""

from __future__ import annotations

from fractions import Fraction

from . import catalog
from .coding import binseq_decode, pair_decode, rational01_decode, rational_decode, upair_decode
from .errors import DomainError
from .sets import SetExpr, window


def longest_progression(values: list[int]) -> int:
    """Length of the longest arithmetic progression inside a finite set."""
    if len(values) <= 2:
        return len(values)
    vs = sorted(values)
    members = set(vs)
    best = 2
    for i, x in enumerate(vs):
        for y in vs[i + 1:]:
            d = y - x
            length = 2
            nxt = y + d
            while nxt in members:
                length += 1
                nxt += d
            best = max(best, length)
    return best


def chromatic_number(edges: list[tuple[int, int]]) -> int:
    vertices = sorted({v for e in edges for v in e})
    if len(vertices) > 24:
        raise DomainError(f"window graph has {len(vertices)} vertices; too large for exact coloring")
    if not vertices:
        return 0
    adj = {v: set() for v in vertices}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)

    def colorable(k: int) -> bool:
        color: dict[int, int] = {}

        def go(i: int) -> bool:
            if i == len(vertices):
                return True
            v = vertices[i]
            used = {color[u] for u in adj[v] if u in color}
            for c in range(k):
                if c not in used:
                    color[v] = c
                    if go(i + 1):
                        return True
                    del color[v]
                if c not in used and c > max(color.values(), default=-1):
                    break  # symmetry: first use of a fresh color is canonical
            return False

        return go(0)

    k = 1
    while not colorable(k):
        k += 1
    return k


def largest_clique(edges: list[tuple[int, int]]) -> int:
    vertices = sorted({v for e in edges for v in e})
    if len(vertices) > 40:
        vertices = vertices[:40]
    index = {v: i for i, v in enumerate(vertices)}
    adj = [0] * len(vertices)
    for a, b in edges:
        if a in index and b in index:
            adj[index[a]] |= 1 << index[b]
            adj[index[b]] |= 1 << index[a]
    # grow cliques level by level; exact and fast enough for window graphs
    cliques = [frozenset([v]) for v in range(len(vertices))]
    best = 1 if vertices else 0
    while cliques:
        nxt = set()
        for c in cliques:
            top = max(c)
            for v in range(top + 1, len(vertices)):
                if all(adj[u] >> v & 1 for u in c):
                    nxt.add(c | {v})
        if nxt:
            best += 1
        cliques = nxt
    return best


def column_profile(codes: list[int], limit: int = 32) -> dict:
    cols: dict[int, int] = {}
    for c in codes:
        n, _ = pair_decode(c)
        cols[n] = cols.get(n, 0) + 1
    shown = {str(k): cols[k] for k in sorted(cols)[:limit]}
    return {"columns": shown, "max_column": max(cols.values(), default=0)}


def diagnostics(handle: catalog.IdealHandle, s: SetExpr, h: int) -> dict:
    """Per-ideal statistics record over window(s, h)."""
    if h < 1:
        raise DomainError("diagnostics need a horizon of at least 1")
    catalog._domain_check(handle, s)
    root = handle.base or handle
    w = window(s, h)
    out: dict = {"ideal": handle.name, "set": str(s), "horizon": h, "count": len(w)}
    fam = root.family
    if fam == "summable":
        total = sum((root.weight(n) for n in w), Fraction(0))
        out["partial_weighted_sum"] = total
    elif fam == "density":
        p = root.partition
        profile = []
        n = 1
        while n <= h:
            below = sum(1 for x in w if x < n)
            profile.append({"n": n, "ratio": Fraction(below, n)})
            n *= 4
        out["density_profile"] = profile
        mus = []
        for idx, block in p.blocks_below(h):
            inside = sum(1 for x in block if x in set(w))
            mus.append({"block": idx, "mu": Fraction(inside, p.block_size(idx))})
            if len(mus) >= 24:
                break
        out["block_densities"] = mus
    elif fam == "farah":
        total = Fraction(0)
        n = 1
        while (1 << n) < h:
            lo, hi = 1 << n, min(1 << (n + 1), h)
            cnt = sum(1 for x in w if lo <= x < hi)
            total += Fraction(min(n, cnt), n * n)
            n += 1
        out["window_series"] = total
    elif fam == "w":
        out["longest_progression"] = longest_progression(w)
    elif fam in ("ed", "edfin", "finxfin", "finxempty", "emptyxfin", "i0"):
        out.update(column_profile(w))
    elif fam == "gfc":
        edges = [upair_decode(c) for c in w]
        out["chromatic_number"] = chromatic_number(edges)
    elif fam == "gc":
        edges = [upair_decode(c) for c in w]
        out["largest_clique"] = largest_clique(edges)
    elif fam == "ran":
        out["elements"] = w[:64]
    elif fam == "trnull":
        words = [binseq_decode(c) for c in w]
        out["cylinder_tail_mass"] = sum(
            (Fraction(1, 1 << len(word)) for word in words), Fraction(0)
        )
        out["max_length"] = max((len(word) for word in words), default=0)
    elif fam == "conv":
        eps = Fraction(1, 16)
        points = sorted(rational01_decode(c) for c in w)
        clusters = 0
        prev = None
        for q in points:
            if prev is None or q - prev > eps:
                clusters += 1
            prev = q
        out["epsilon"] = eps
        out["cluster_count"] = clusters
    elif fam == "nwd":
        points = sorted(rational_decode(c) for c in w)
        if points:
            import math

            lo = math.floor(points[0])
            hi = math.ceil(points[-1]) or 1
            cells = 16 * max(1, hi - lo)
            hit = set()
            for q in points:
                cell = int((q - lo) * cells / (hi - lo)) if hi > lo else 0
                hit.add(min(cell, cells - 1))
            out["interval_coverage"] = {"cells": cells, "occupied": len(hit)}
        else:
            out["interval_coverage"] = {"cells": 0, "occupied": 0}
    elif fam == "solecki":
        depths = [catalog.omega_code_decode(c)[0] for c in w]
        out["depth_profile"] = {str(d): depths.count(d) for d in sorted(set(depths))}
    if handle.family == "restrict":
        y = handle.index_set
        wy = window(y, h)
        inside = set(w)
        rel = []
        k = 1
        while k <= len(wy):
            rel.append({"k": k, "ratio": Fraction(sum(1 for v in wy[:k] if v in inside), k)})
            k *= 4
        out["relative_density_profile"] = rel
    return out
