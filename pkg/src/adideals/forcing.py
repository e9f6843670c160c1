"""A finite-condition poset whose generic objects are refinement prefixes.

Conditions are finite partial functions from family indices to finite
subsets of the corresponding sets; extension may grow the values but must
freeze every pairwise intersection already visible.  That freezing clause
is exactly what makes the union of a generic chain an almost-disjoint
assignment: once two indices both appear, their intersection never changes.

The projection onto single-index Cohen conditions (finite partial 0/1
functions on H_alpha) satisfies the two projection laws; the lift
construction routes fresh 0-valued points to other family members, which is
why the family always carries the full set as a member.

Genericity is finitized: the engine meets an explicit list of dense
requests ("touch an index", "absorb a fresh witness block"), and the
absorbed-block counts are reported rather than any positivity claim.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import random

from . import catalog, meager, partitions as parts, structure as st
from .catalog import IdealHandle
from .errors import DomainError, InternalCheckError
from .sets import OMEGA, SetExpr, contains, window


@dataclass(frozen=True)
class Condition:
    """index -> finite subset of that index's set; immutable."""

    values: tuple[tuple[int, frozenset[int]], ...] = ()

    @staticmethod
    def of(mapping: dict[int, set[int] | frozenset[int] | list[int]]) -> "Condition":
        items = tuple(sorted((k, frozenset(v)) for k, v in mapping.items()))
        return Condition(items)

    @property
    def mapping(self) -> dict[int, frozenset[int]]:
        return dict(self.values)

    @property
    def domain(self) -> tuple[int, ...]:
        return tuple(k for k, _ in self.values)

    def get(self, alpha: int) -> frozenset[int]:
        return self.mapping.get(alpha, frozenset())

    def to_json(self) -> dict:
        return {str(k): sorted(v) for k, v in self.values}

    def __str__(self):
        inner = ", ".join(f"{k}:{sorted(v)}" for k, v in self.values)
        return "{" + inner + "}"


@dataclass(frozen=True)
class CohenCondition:
    """Finite partial function from a set to {0, 1}."""

    values: tuple[tuple[int, int], ...] = ()

    @staticmethod
    def of(mapping: dict[int, int]) -> "CohenCondition":
        if any(v not in (0, 1) for v in mapping.values()):
            raise DomainError("Cohen conditions take values 0/1")
        return CohenCondition(tuple(sorted(mapping.items())))

    @property
    def mapping(self) -> dict[int, int]:
        return dict(self.values)

    @property
    def domain(self) -> tuple[int, ...]:
        return tuple(k for k, _ in self.values)

    def extends(self, other: "CohenCondition") -> bool:
        mine = self.mapping
        return all(mine.get(k) == v for k, v in other.values)

    def to_json(self) -> dict:
        return {str(k): v for k, v in self.values}


@dataclass(frozen=True)
class DenseRequest:
    kind: str  # "touch" | "block"
    alpha: int
    min_index: int = 0

    @staticmethod
    def parse(text: str) -> "DenseRequest":
        toks = text.split()
        if len(toks) == 2 and toks[0] == "touch":
            return DenseRequest("touch", int(toks[1]))
        if len(toks) == 3 and toks[0] == "block":
            return DenseRequest("block", int(toks[1]), int(toks[2]))
        raise DomainError(f"bad dense request {text!r}; want 'touch A' or 'block A N'")

    def __str__(self):
        if self.kind == "touch":
            return f"touch {self.alpha}"
        return f"block {self.alpha} {self.min_index}"


class ForcingFamily:
    """The indexed family of positive targets; the full set is always a member.

    When missing, the full set is appended at the end so user indices stay
    stable (it is the normalization the lift construction needs: every point
    belongs to some member other than the lifted index).
    """

    def __init__(self, members, handle: IdealHandle | None = None):
        self.members = [st.simplify(m) for m in members]
        if not any(m == OMEGA for m in self.members):
            self.members.append(OMEGA)
        self.handle = handle
        if handle is not None:
            for i, m in enumerate(self.members):
                v = catalog.member(handle, m)
                if not v.is_out:
                    raise DomainError(f"family member {i} has verdict {v.answer}, not positive")
        self._witnesses: dict[int, parts.Partition] = {}

    def __len__(self):
        return len(self.members)

    def member_set(self, alpha: int) -> SetExpr:
        if not 0 <= alpha < len(self.members):
            raise DomainError(f"index {alpha} outside the family")
        return self.members[alpha]

    def contains_point(self, alpha: int, n: int) -> bool:
        return contains(self.member_set(alpha), n)

    def witness(self, alpha: int) -> parts.Partition:
        if alpha not in self._witnesses:
            if self.handle is None:
                raise DomainError("block requests need an ideal with witness support")
            target = self.member_set(alpha)
            h = self.handle if target == OMEGA else catalog.restrict(self.handle, target)
            self._witnesses[alpha] = meager.talagrand_witness(h)
        return self._witnesses[alpha]

    def validate(self, p: Condition, horizon: int | None = None) -> None:
        for alpha, vals in p.values:
            for n in vals:
                if not self.contains_point(alpha, n):
                    raise DomainError(
                        f"condition value {n} is outside member {alpha}"
                    )


def leq(p: Condition, q: Condition) -> bool:
    """p extends q: larger domain, larger values, frozen intersections."""
    pm, qm = p.mapping, q.mapping
    if not set(qm) <= set(pm):
        return False
    if not all(pm[a] >= v for a, v in qm.items()):
        return False
    dom_q = sorted(qm)
    for i, a in enumerate(dom_q):
        for b in dom_q[i + 1:]:
            if pm[a] & pm[b] != qm[a] & qm[b]:
                return False
    return True


def _first_clash(r: Condition, p: Condition) -> tuple[int, int] | None:
    rm, pm = r.mapping, p.mapping
    dom = sorted(pm)
    for i, a in enumerate(dom):
        for b in dom[i + 1:]:
            if rm[a] & rm[b] != pm[a] & pm[b]:
                return a, b
    return None


def meet(p: Condition, q: Condition) -> Condition | dict:
    """The pointwise union when it extends both, else an incompatibility report.

    Any common extension must contain the pointwise union, and extensions
    only grow intersections: so the union failing the frozen-intersection
    test against either input refutes compatibility outright.
    """
    merged: dict[int, frozenset[int]] = dict(p.values)
    for a, v in q.values:
        merged[a] = merged.get(a, frozenset()) | v
    r = Condition.of(merged)
    if leq(r, p) and leq(r, q):
        return r
    clash = _first_clash(r, p) or _first_clash(r, q)
    return {
        "compatible": False,
        "clash_pair": list(clash) if clash else None,
        "reason": "the frozen intersection of the clash pair would grow",
    }


def project(p: Condition, alpha: int, family: ForcingFamily) -> CohenCondition:
    """dom = union of the values traced on member alpha; 1 exactly on p(alpha)."""
    target = family.member_set(alpha)
    dom: set[int] = set()
    for _beta, vals in p.values:
        dom.update(n for n in vals if contains(target, n))
    ones = p.get(alpha)
    return CohenCondition.of({n: 1 if n in ones else 0 for n in dom})


def lift(p: Condition, s: CohenCondition, alpha: int, family: ForcingFamily) -> Condition:
    """A condition below p projecting exactly to s (s must extend project(p)).

    New 1-valued points join p(alpha); new 0-valued points are routed to the
    least other member containing them, so the projection stays exact and
    no visible intersection grows (routed points are fresh everywhere).
    """
    e_p = project(p, alpha, family)
    if not s.extends(e_p):
        raise DomainError("the Cohen condition does not extend the projection")
    target = family.member_set(alpha)
    for n in s.domain:
        if not contains(target, n):
            raise DomainError(f"Cohen point {n} lies outside member {alpha}")
    new = dict(p.mapping)
    fresh = [n for n, v in s.values if n not in e_p.mapping and v == 0]
    ones = frozenset(n for n, v in s.values if v == 1)
    new[alpha] = new.get(alpha, frozenset()) | ones
    for n in fresh:
        gamma = None
        for beta in range(len(family)):
            if beta != alpha and family.contains_point(beta, n):
                gamma = beta
                break
        if gamma is None:
            raise InternalCheckError(f"no member besides {alpha} contains {n}")
        new[gamma] = new.get(gamma, frozenset()) | {n}
    p2 = Condition.of(new)
    if not leq(p2, p):
        raise InternalCheckError("lift result does not extend the input condition")
    if project(p2, alpha, family) != s:
        raise InternalCheckError("lift result projects to the wrong Cohen condition")
    return p2


@dataclass
class GenericRun:
    family: list[str]
    chain: list[Condition]
    steps: list[dict]
    windows: dict[int, list[int]]
    freeze: dict[tuple[int, int], dict]
    blocks_absorbed: dict[int, int]
    failures: list[dict]

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "steps": self.steps,
            "final": self.chain[-1].to_json() if self.chain else {},
            "summary": [
                {
                    "index": a,
                    "window": self.windows[a],
                    "blocks_absorbed": self.blocks_absorbed.get(a, 0),
                    "pairwise": [
                        {"pair": list(k), "frozen": v["frozen"], "at_step": v["at_step"]}
                        for k, v in sorted(self.freeze.items())
                        if a in k
                    ],
                }
                for a in sorted(self.windows)
            ],
            "failures": self.failures,
        }


def generic_run(family: ForcingFamily, requests, seed: int | None = None,
                budget: int = 1 << 16) -> GenericRun:
    """Build a descending chain meeting the dense requests in order.

    touch A: put A into the domain.  block A N: absorb one full block of A's
    restricted witness with index >= N, placed beyond every current value so
    all frozen intersections survive.  All picks are least-admissible; the
    seed only shuffles the request order (recorded in the transcript).
    """
    reqs = [r if isinstance(r, DenseRequest) else DenseRequest.parse(r) for r in requests]
    if seed is not None:
        rng = random.Random(seed)
        rng.shuffle(reqs)
    chain = [Condition.of({})]
    steps: list[dict] = []
    failures: list[dict] = []
    blocks_absorbed: dict[int, int] = {}
    freeze: dict[tuple[int, int], dict] = {}
    used_block: dict[int, int] = {}

    def record_freezes(cond: Condition, at: int):
        dom = sorted(cond.mapping)
        for i, a in enumerate(dom):
            for b in dom[i + 1:]:
                if (a, b) not in freeze:
                    freeze[(a, b)] = {
                        "at_step": at,
                        "frozen": sorted(cond.get(a) & cond.get(b)),
                    }

    for step, req in enumerate(reqs):
        p = chain[-1]
        if req.kind == "touch":
            family.member_set(req.alpha)
            if req.alpha in p.mapping:
                q = p
            else:
                new = dict(p.mapping)
                new[req.alpha] = frozenset()
                q = Condition.of(new)
        else:
            witness = family.witness(req.alpha)
            current_max = max((max(v) for _k, v in p.values if v), default=-1)
            idx = max(req.min_index, used_block.get(req.alpha, -1) + 1)
            found = None
            for _ in range(budget):
                lo, _hi = witness.block_bounds(idx)
                if lo > current_max:
                    try:
                        found = witness.block(idx)
                    except DomainError:
                        found = None
                    break
                idx += 1
            if found is None:
                failures.append({"request": str(req), "reason": "no admissible witness block"})
                steps.append({"request": str(req), "failed": True})
                continue
            used_block[req.alpha] = idx
            new = dict(p.mapping)
            new[req.alpha] = new.get(req.alpha, frozenset()) | frozenset(found)
            q = Condition.of(new)
            blocks_absorbed[req.alpha] = blocks_absorbed.get(req.alpha, 0) + 1
        if not leq(q, p):
            raise InternalCheckError(f"step {step} broke the chain order")
        record_freezes(q, step)
        delta = {
            a: sorted(q.get(a) - p.get(a)) for a in q.mapping
            if q.get(a) != p.get(a) or a not in p.mapping
        }
        steps.append(
            {
                "request": str(req),
                "condition_delta": {str(a): v for a, v in sorted(delta.items())},
                "freeze_events": [
                    {"pair": list(k), "frozen": v["frozen"]}
                    for k, v in freeze.items()
                    if v["at_step"] == step
                ],
            }
        )
        chain.append(q)
    final = chain[-1]
    record_freezes(final, len(reqs))
    windows = {a: sorted(final.get(a)) for a in final.mapping}
    return GenericRun(
        [str(m) for m in family.members], chain, steps, windows, freeze,
        blocks_absorbed, failures,
    )
