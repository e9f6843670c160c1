"""Almost-disjoint families from tree branches and their refinements.

The perfect AD family is the branches of the binary tree, realized as code
sets; blowing a branch set up along a witness partition turns it into a
family of positive sets whose pairwise intersections are exactly the blocks
of the common prefixes, hence finite.

``greedy_adr`` is the desk-scale instantiation of the refinement recursion:
fix the branch family over the first target, give every target a positive
branch-derived subset, and push the targets that meet the current family in
a small set into a later phase (the finite stand-in for the cardinality
bookkeeping of the transfinite argument).  ``fin_upgrade`` then trims along
pseudo-unions so pairwise intersections become outright finite.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import catalog, meager, partitions as parts, structure as st
from .catalog import IdealHandle, member, pseudo_union_with_cuts
from .coding import binseq_encode
from .errors import DomainError, InternalCheckError
from .sets import Blowup, Branch, Diff, Inter, SetExpr, window


def branch_set(word: str, depth: int) -> list[int]:
    """Codes of the prefixes word|0, ..., word|depth, ascending."""
    if depth > len(word):
        raise DomainError(f"depth {depth} exceeds |{word}| = {len(word)}")
    return [binseq_encode(word[:i]) for i in range(depth + 1)]


def blowup(s: SetExpr, p: parts.Partition) -> SetExpr:
    """The union of the blocks of p whose indices lie in s."""
    return Blowup(s, p)


def ad_intersection_size(x: str, y: str, p: parts.Partition) -> int:
    """Exact cardinality of the intersection of the two branch blow-ups.

    The blow-ups share exactly the blocks of the common-prefix codes, so the
    answer is a block-size sum (computed without materializing blocks).
    """
    if any(c not in "01" for c in x + y):
        raise DomainError("branch words must be binary")
    m = min(len(x), len(y))
    if x[:m] == y[:m]:
        raise DomainError(
            f"{x!r} and {y!r} do not diverge within their common length: "
            "not distinct branches"
        )
    k = next(i for i in range(m) if x[i] != y[i])
    return sum(p.block_size(binseq_encode(x[:i])) for i in range(k + 1))


@dataclass(frozen=True)
class BranchFamily:
    """The canonical perfect AD family: branch sets blown up along `base`."""

    base: parts.Partition

    def member_expr(self, word: str) -> SetExpr:
        return Blowup(Branch(word), self.base)


def _diverges_from_all(word: str, used: list[str]) -> bool:
    for u in used:
        m = min(len(word), len(u))
        if word[:m] == u[:m]:
            return False
    return True


@dataclass
class AssignmentEntry:
    index: int
    target: SetExpr
    chosen: SetExpr
    word: str
    phase: int
    positivity: catalog.Verdict
    cut: int = 0

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "target": str(self.target),
            "chosen": str(self.chosen),
            "branch": self.word,
            "phase": self.phase,
            "positivity_evidence": {
                "answer": self.positivity.answer,
                "evidence": self.positivity.evidence,
            },
            "cut_index": self.cut,
        }


@dataclass
class RefinementAssignment:
    ideal: str
    entries: dict[int, AssignmentEntry] = field(default_factory=dict)
    pairwise: dict[tuple[int, int], dict] = field(default_factory=dict)
    failures: list[dict] = field(default_factory=list)
    phase_bases: list[int] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "ideal": self.ideal,
            "entries": [self.entries[i].to_json() for i in sorted(self.entries)],
            "pairwise": [
                {"pair": list(k), **v} for k, v in sorted(self.pairwise.items())
            ],
            "failures": self.failures,
            "phase_bases": self.phase_bases,
        }


def _positivity(handle: IdealHandle, expr: SetExpr, witness: parts.Partition,
                evidence_blocks: int) -> catalog.Verdict:
    v = member(handle, expr)
    if v.answer != catalog.UNKNOWN:
        return v
    # decision table silent: report finite block-absorption evidence instead
    hits = sum(
        1 for i in range(evidence_blocks) if meager.block_contained(expr, witness, i)
    )
    return catalog.Verdict(
        catalog.UNKNOWN, evidence_blocks,
        f"undecided; contains {hits} of the first {evidence_blocks} witness blocks",
    )


def greedy_adr(handle: IdealHandle, family, budget: int = 64) -> RefinementAssignment:
    """Assign each positive target a positive branch-derived subset.

    Pairwise intersections within a phase are finite outright (common-prefix
    blocks); across phases they sit inside a decided-In overlap, recorded in
    the ledger.  Targets whose overlap with the current base is already small
    move to the next phase; budget exhaustion produces explicit failures.
    """
    targets = [st.simplify(s) for s in family]
    for i, t in enumerate(targets):
        v = member(handle, t)
        if not v.is_out:
            raise DomainError(f"family member {i} has verdict {v.answer}, not positive")
    out = RefinementAssignment(ideal=handle.name)
    remaining = list(range(len(targets)))
    phase = 0
    phase_of: dict[int, int] = {}
    base_expr: dict[int, SetExpr] = {}
    small_overlap: dict[int, tuple[int, SetExpr]] = {}
    while remaining:
        base_idx = remaining[0]
        y = targets[base_idx]
        out.phase_bases.append(base_idx)
        witness = meager.talagrand_witness(
            catalog.restrict(handle, y) if y != parts.sets.OMEGA else handle
        )
        fam = BranchFamily(witness)
        used: list[str] = []
        deferred: list[int] = []
        wordlen = max(2, (len(remaining)).bit_length())
        for alpha in remaining:
            overlap = st.simplify(Inter(y, targets[alpha])) if alpha != base_idx else y
            ov = member(handle, overlap)
            if ov.is_in:
                deferred.append(alpha)
                small_overlap[alpha] = (phase, overlap)
                continue
            assigned = False
            tried = 0
            length = wordlen
            while tried < budget and not assigned:
                for value in range(1 << length):
                    word = format(value, "b").zfill(length)
                    if not _diverges_from_all(word, used):
                        continue
                    tried += 1
                    chosen = st.simplify(Inter(targets[alpha], fam.member_expr(word)))
                    v = _positivity(handle, chosen, witness, 8)
                    if v.is_out:
                        used.append(word)
                        out.entries[alpha] = AssignmentEntry(
                            alpha, targets[alpha], chosen, word, phase, v
                        )
                        phase_of[alpha] = phase
                        base_expr[alpha] = y
                        assigned = True
                        break
                    if tried >= budget:
                        break
                length += 1  # retry with deeper branches
            if not assigned and alpha not in deferred:
                out.failures.append(
                    {"index": alpha, "reason": f"no positive branch subset within budget {budget}"}
                )
        remaining = deferred
        phase += 1
        if phase > len(targets) + 1:
            raise InternalCheckError("phase recursion failed to terminate")
    _verify_pairwise(handle, out, phase_of, base_expr, targets, small_overlap)
    return out


def _verify_pairwise(handle, out, phase_of, base_expr, targets, small_overlap):
    indices = sorted(out.entries)
    for i, a in enumerate(indices):
        for b in indices[i + 1:]:
            ea, eb = out.entries[a], out.entries[b]
            expr = st.simplify(Inter(ea.chosen, eb.chosen))
            v = member(handle, expr)
            note = ""
            if not v.is_in:
                lo_e, hi_e = (ea, eb) if ea.phase <= eb.phase else (eb, ea)
                cand = None
                if hi_e.index in small_overlap and small_overlap[hi_e.index][0] == lo_e.phase:
                    cand = small_overlap[hi_e.index][1]
                if cand is not None and st.proves_subset(expr, cand):
                    vc = member(handle, cand)
                    if vc.is_in:
                        v = catalog.Verdict(catalog.IN, 0, f"subset of the decided-In overlap {cand}")
                        note = "via overlap"
            if not v.is_in:
                raise InternalCheckError(
                    f"pairwise intersection of {a} and {b} not certified In: {v.answer}"
                )
            fin = st.is_finite(expr)
            out.pairwise[(a, b)] = {
                "verdict": v.answer,
                "evidence": v.evidence + ((" (" + note + ")") if note else ""),
                "finite": bool(fin),
            }


def fin_upgrade(handle: IdealHandle, adr: RefinementAssignment) -> RefinementAssignment:
    """Trim along pseudo-unions so pairwise intersections become finite.

    For each index in order, the pseudo-union of its intersections with the
    earlier sets is removed; what remains is still positive (positive minus
    a member) and meets earlier sets only below the recorded cut.
    """
    if "pseudo-union" not in handle.capabilities:
        raise DomainError(f"{handle.name} has no pseudo-union capability")
    for key, row in adr.pairwise.items():
        if row["verdict"] != catalog.IN:
            raise DomainError(f"pairwise intersection {key} is not decided In")
    upgraded = RefinementAssignment(ideal=adr.ideal, failures=list(adr.failures),
                                    phase_bases=list(adr.phase_bases))
    order = sorted(adr.entries)
    new_exprs: dict[int, SetExpr] = {}
    cuts: dict[int, int] = {}
    pair_cuts: dict[tuple[int, int], int] = {}
    for pos, alpha in enumerate(order):
        entry = adr.entries[alpha]
        earlier = order[:pos]
        inters = [st.simplify(Inter(entry.chosen, adr.entries[b].chosen)) for b in earlier]
        if inters:
            bset, cut_list = pseudo_union_with_cuts(handle, inters)
            new_expr = st.simplify(Diff(entry.chosen, bset))
            cut = max(cut_list, default=0)
            for b, c in zip(earlier, cut_list):
                pair_cuts[(min(alpha, b), max(alpha, b))] = max(
                    pair_cuts.get((min(alpha, b), max(alpha, b)), 0), c
                )
        else:
            new_expr, cut = entry.chosen, 0
        v = member(handle, new_expr)
        if not v.is_out:
            raise InternalCheckError(
                f"upgraded set for index {alpha} lost positivity: {v.answer}"
            )
        new_exprs[alpha] = new_expr
        cuts[alpha] = cut
        upgraded.entries[alpha] = AssignmentEntry(
            alpha, entry.target, new_expr, entry.word, entry.phase, v, cut
        )
    for (a, b), row in adr.pairwise.items():
        upgraded.pairwise[(a, b)] = {
            "verdict": catalog.IN,
            "evidence": "trimmed below the recorded cut",
            "finite": True,
            "cut": pair_cuts.get((a, b), 0),
        }
    return upgraded
