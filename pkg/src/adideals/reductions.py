"""Computable reduction maps on finite codes.

* ``j_tree``       -- the prime-power embedding of finite sequence trees into
  strictly-increasing trees with unique minimal occurrences (p_0 = 2).
* ``edge_graph``   -- the union of range-cliques of a tree's nodes.
* ``clique_iff_node`` -- for certified trees the two sides of the reduction
  agree, and the operation returns both so tests can confirm it.
* ``clopen_to_aset``  -- planar sets from clopen codes via the length-lex
  word enumeration.
* ``i0_search``    -- the finite Ramsey-style search: color index pairs by
  the four membership patterns, take a largest monochromatic set, split it
  alternately, and emit a verified rectangle/triangle witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
import random

from .coding import binseq_decode
from .errors import DomainError, InternalCheckError

_PRIMES = [2, 3, 5, 7, 11, 13]


def nth_prime(i: int) -> int:
    while len(_PRIMES) <= i:
        c = _PRIMES[-1] + 2
        while any(c % p == 0 for p in _PRIMES if p * p <= c):
            c += 1
        _PRIMES.append(c)
    return _PRIMES[i]


@dataclass(frozen=True)
class TreeCode:
    """A finite prefix-closed set of finite sequences of naturals."""

    nodes: frozenset[tuple[int, ...]]
    increasing: bool = False  # certified: strictly increasing nodes with
    #                           unique minimal occurrence per value

    @staticmethod
    def of(nodes, certify: bool = False) -> "TreeCode":
        nodes = frozenset(tuple(t) for t in nodes)
        for t in nodes:
            for i in range(len(t)):
                if t[:i] not in nodes:
                    raise DomainError(f"not prefix closed: missing {t[:i]} under {t}")
        code = TreeCode(nodes, False)
        if certify:
            ok, why = code.check_increasing()
            if not ok:
                raise DomainError(why)
            code = TreeCode(nodes, True)
        return code

    def check_increasing(self) -> tuple[bool, str]:
        for t in self.nodes:
            if any(a >= b for a, b in zip(t, t[1:])):
                return False, f"node {t} is not strictly increasing"
        values = {v for t in self.nodes for v in t}
        for v in sorted(values):
            holders = sorted((t for t in self.nodes if v in t), key=len)
            base = holders[0]
            if any(h[: len(base)] != base for h in holders):
                return False, f"occurrences of {v} have no minimal node"
        return True, ""

    def depth(self) -> int:
        return max((len(t) for t in self.nodes), default=0)


def j_node(t) -> tuple[int, ...]:
    """(k_0, ..., k_{m-1}) -> cumulative products of p_{k_i}^{i+1}."""
    t = tuple(t)
    out = []
    acc = 1
    for i, k in enumerate(t):
        if k < 0:
            raise DomainError("sequence entries must be naturals")
        power = nth_prime(k) ** (i + 1)
        if power.bit_length() > 256:
            raise DomainError(f"prime power overflow at position {i} of {t}")
        acc *= power
        out.append(acc)
    return tuple(out)


def j_tree(tree: TreeCode) -> TreeCode:
    """Node-wise image; the result is certified strictly increasing with
    unique minimal occurrences."""
    image = {j_node(t) for t in tree.nodes}
    out = TreeCode.of(image, certify=True)
    return out


def edge_graph(tree: TreeCode) -> frozenset[frozenset[int]]:
    """The union of the range-cliques of the nodes."""
    edges = set()
    for t in tree.nodes:
        for a, b in combinations(sorted(set(t)), 2):
            edges.add(frozenset((a, b)))
    return frozenset(edges)


def clique_iff_node(tree: TreeCode, xs) -> tuple[bool, bool]:
    """([X]^2 inside the edge graph, X inside some node's range).

    For certified trees the booleans agree, which is what the exhaustive
    suites confirm; the operation itself just computes both sides.
    """
    if not tree.increasing:
        raise DomainError("clique_iff_node needs a certified tree")
    xs = sorted(set(xs))
    if len(xs) < 2:
        raise DomainError("need at least two vertices")
    edges = edge_graph(tree)
    clique = all(frozenset((a, b)) in edges for a, b in combinations(xs, 2))
    in_node = any(set(xs) <= set(t) for t in tree.nodes)
    return clique, in_node


@dataclass(frozen=True)
class ClopenCode:
    """depth d plus a subset of the depth-d words (a union of cylinders)."""

    depth: int
    words: frozenset[str]

    @staticmethod
    def of(depth: int, words) -> "ClopenCode":
        words = frozenset(words)
        if depth < 0:
            raise DomainError("depth must be a natural")
        for w in words:
            if len(w) != depth or any(c not in "01" for c in w):
                raise DomainError(f"word {w!r} is not a depth-{depth} binary word")
        return ClopenCode(depth, words)

    def measure(self) -> Fraction:
        return Fraction(len(self.words), 1 << self.depth)

    def meets_cylinder(self, s: str) -> bool:
        """[s] ∩ C nonempty: some word is comparable with s."""
        if self.depth == 0:
            return bool(self.words)
        if len(s) <= self.depth:
            return any(w.startswith(s) for w in self.words)
        return s[: self.depth] in self.words


def clopen_to_aset(c: ClopenCode, h: int) -> set[tuple[int, int]]:
    """{(m, n) : |s_m| > n, s_m(n) = 1, [s_m] meets C}, for m, n < h."""
    out = set()
    for m in range(h):
        word = binseq_decode(m)
        if not c.meets_cylinder(word):
            continue
        for n in range(min(len(word), h)):
            if word[n] == "1":
                out.add((m, n))
    return out


def _largest_monochromatic(colors: dict[tuple[int, int], tuple[int, int]],
                           q: int) -> tuple[tuple[int, int], list[int]]:
    """Largest index set all of whose pairs share one color (ties: color
    order (0,0) < (1,0) < (0,1) < (1,1), then lexicographic set)."""
    order = [(0, 0), (1, 0), (0, 1), (1, 1)]
    best_color, best = order[0], []
    for color in order:
        adj = [set() for _ in range(q)]
        for (a, b), c in colors.items():
            if c == color:
                adj[a].add(b)
                adj[b].add(a)
        # exact max clique by branch and bound over the small index graph
        best_local: list[int] = []

        def grow(current: list[int], candidates: list[int]):
            nonlocal best_local
            if len(current) + len(candidates) <= len(best_local):
                return
            if not candidates:
                if len(current) > len(best_local):
                    best_local = list(current)
                return
            v = candidates[0]
            grow(current + [v], [u for u in candidates[1:] if u in adj[v]])
            grow(current, candidates[1:])

        grow([], list(range(q)))
        if len(best_local) > len(best):
            best, best_color = sorted(best_local), color
    return best_color, best


def i0_search(a_set, xs, ys, floor: int = 6) -> dict:
    """Find a verified witness among: (a) an avoided rectangle, (b) an upper
    triangle inside the set, (c) a lower triangle inside, (d) a full rectangle.

    Inputs are normalized to the alternating enumeration x0 < y0 < x1 < ...
    by shrinking; the pair coloring (membership of (x_m, y_n) and (x_n, y_m))
    is searched exhaustively for its largest monochromatic set, which is then
    split alternately into the two coordinates.
    """
    a_set = {tuple(p) for p in a_set}
    xs, ys = sorted(set(xs)), sorted(set(ys))
    if len(xs) < floor or len(ys) < floor:
        raise DomainError(f"need at least {floor} points per side, got {len(xs)}/{len(ys)}")
    ax: list[int] = []
    ay: list[int] = []
    xi = yi = 0
    last = -1
    while True:
        while xi < len(xs) and xs[xi] <= last:
            xi += 1
        if xi >= len(xs):
            break
        x = xs[xi]
        while yi < len(ys) and ys[yi] <= x:
            yi += 1
        if yi >= len(ys):
            break
        ax.append(x)
        ay.append(ys[yi])
        last = ys[yi]
    q = len(ax)
    if q < floor:
        raise DomainError(
            f"alternating normalization leaves only {q} pairs; need {floor}"
        )
    chi = lambda x, y: 1 if (x, y) in a_set else 0
    colors = {
        (m, n): (chi(ax[m], ay[n]), chi(ax[n], ay[m]))
        for m in range(q)
        for n in range(m + 1, q)
    }
    color, S = _largest_monochromatic(colors, q)
    z_part = [S[i] for i in range(0, len(S), 2)]
    w_part = [S[i] for i in range(1, len(S), 2)]
    X2 = [ax[m] for m in z_part]
    Y2 = [ay[n] for n in w_part]
    kind = {(0, 0): "avoided-rectangle", (1, 0): "upper-triangle",
            (0, 1): "lower-triangle", (1, 1): "full-rectangle"}[color]
    witness = {"kind": kind, "X": X2, "Y": Y2, "mono_size": len(S)}
    _verify_i0(a_set, kind, X2, Y2)
    return witness


def _verify_i0(a_set, kind, X2, Y2) -> None:
    for x in X2:
        for y in Y2:
            inside = (x, y) in a_set
            if kind == "avoided-rectangle" and inside:
                raise InternalCheckError(f"witness rectangle meets the set at {(x, y)}")
            if kind == "full-rectangle" and not inside:
                raise InternalCheckError(f"witness rectangle misses the set at {(x, y)}")
            if kind == "upper-triangle" and x < y and not inside:
                raise InternalCheckError(f"upper triangle misses {(x, y)}")
            if kind == "lower-triangle" and x > y and not inside:
                raise InternalCheckError(f"lower triangle misses {(x, y)}")


def seeded_instance(seed: int, side: int = 12, bound: int = 200,
                    density: float | None = None) -> tuple[set, list, list]:
    """Deterministic (A, X, Y) with |X| = |Y| = side, X and Y alternating.

    A is drawn on the X x Y grid (that is where the search looks), at a
    seed-dependent density so all four outcome kinds arise across seeds.
    """
    rng = random.Random(seed)
    points = sorted(rng.sample(range(bound), 2 * side))
    xs = points[0::2]
    ys = points[1::2]
    dens = rng.random() if density is None else density
    a_set = {(x, y) for x in xs for y in ys if rng.random() < dens}
    return a_set, xs, ys
