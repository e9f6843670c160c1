"""Batch command line: parse expressions, run one scenario, print JSON.

One verb per construction: member, diag, talagrand, dominate,
adr {greedy,upgrade,forcing}, mix {check,pair,slalom,nest,measure-bound},
reduce {jtree,edges,clopen,i0}, rado {edge,witness,hom}, encode.

Output is deterministic given identical arguments and seed.  Exit codes:
0 success, 1 precondition/parse errors, 2 a broken internal invariant.
Rationals are serialized as "p/q" strings, sets as sorted arrays next to an
explicit horizon field.  Schemas for every subcommand live in ``SCHEMAS``.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import adfam, catalog, diagnostics, forcing, meager, mixing, reductions
from .errors import DomainError, InternalCheckError
from .parser import parse_function, parse_ideal, parse_partition, parse_set
from .sets import window


def _plain(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(_plain(v) for v in obj)
    return obj


def _emit(payload: dict) -> None:
    print(json.dumps(_plain(payload), sort_keys=True, separators=(",", ":")))


def _split(text: str) -> list[str]:
    return [part.strip() for part in text.split(";") if part.strip()]


_VERDICT_SCHEMA = {
    "type": "object",
    "required": ["answer", "horizon", "evidence"],
    "properties": {
        "answer": {"enum": ["In", "Out", "Unknown"]},
        "horizon": {"type": "integer"},
        "evidence": {"type": "string"},
    },
}

SCHEMAS = {
    "member": _VERDICT_SCHEMA,
    "diag": {"type": "object", "required": ["ideal", "set", "horizon", "count"]},
    "talagrand": {"type": "object", "required": ["partition", "ideal"]},
    "dominate": {"type": "object", "required": ["boundaries", "containment"]},
    "adr-greedy": {"type": "object", "required": ["ideal", "entries", "pairwise"]},
    "adr-upgrade": {"type": "object", "required": ["ideal", "entries", "pairwise"]},
    "adr-forcing": {"type": "object", "required": ["family", "steps", "summary"]},
    "mix-check": {"type": "object", "required": ["horizon", "pairs", "min_count"]},
    "mix-pair": {"type": "object", "required": ["X", "Y", "verify"]},
    "mix-slalom": {"type": "object", "required": ["X", "Y", "levels", "check"]},
    "mix-nest": {"type": "object", "required": ["blocks", "report"]},
    "mix-measure-bound": {
        "type": "object",
        "required": ["epsilon", "bound"],
        "properties": {"epsilon": {"type": "string"}, "bound": {"type": "string"}},
    },
    "reduce-jtree": {"type": "object", "required": ["nodes", "depth"]},
    "reduce-edges": {"type": "object", "required": ["edges"]},
    "reduce-clopen": {"type": "object", "required": ["pairs", "horizon"]},
    "reduce-i0": {"type": "object", "required": ["kind", "X", "Y"]},
    "rado-edge": {"type": "object", "required": ["edge"]},
    "rado-witness": {"type": "object", "required": ["witness"]},
    "rado-hom": {"type": "object", "required": ["set"]},
    "encode": {"type": "object", "required": ["coding"]},
}


def _parse_tree(text: str) -> reductions.TreeCode:
    nodes = [()]
    for line in _split(text):
        if line in ("-", "()"):
            continue
        nodes.append(tuple(int(x) for x in line.split(",") if x != ""))
    return reductions.TreeCode.of(nodes)


def _cmd_member(args):
    handle = parse_ideal(args.ideal)
    verdict = catalog.member(handle, parse_set(args.set))
    _emit(verdict.to_json())


def _cmd_diag(args):
    handle = parse_ideal(args.ideal)
    _emit(diagnostics.diagnostics(handle, parse_set(args.set), args.horizon))


def _cmd_talagrand(args):
    handle = parse_ideal(args.ideal)
    witness = meager.talagrand_witness(handle)
    payload = {
        "partition": str(witness),
        "ideal": handle.name,
        "blocks": [sorted(witness.block(i)) for i in range(min(args.blocks, 12))],
    }
    if args.samples:
        samples = [parse_set(s) for s in _split(args.samples)]
        payload["report"] = meager.verify_talagrand(witness, handle, samples, args.blocks)
    _emit(payload)


def _cmd_dominate(args):
    ps = [parse_partition(p) for p in _split(args.partitions)]
    r = meager.dominate(ps)
    upto = args.blocks
    payload = {
        "boundaries": [r.boundary(i) for i in range(upto + 1)],
        "containment": meager.dominate_report(r, ps, upto),
    }
    _emit(payload)


def _run_greedy(args):
    handle = parse_ideal(args.ideal)
    family = [parse_set(s) for s in _split(args.family)]
    return handle, adfam.greedy_adr(handle, family, budget=args.budget)


def _cmd_adr_greedy(args):
    _handle, adr = _run_greedy(args)
    _emit(adr.to_json())


def _cmd_adr_upgrade(args):
    handle, adr = _run_greedy(args)
    _emit(adfam.fin_upgrade(handle, adr).to_json())


def _cmd_adr_forcing(args):
    handle = parse_ideal(args.ideal)
    members = [parse_set(s) for s in _split(args.family)]
    family = forcing.ForcingFamily(members, handle)
    run = forcing.generic_run(family, _split(args.requests), seed=args.seed)
    _emit(run.to_json())


def _cmd_mix_check(args):
    ground = mixing.GroundFamily.of([parse_set(s) for s in _split(args.ground)], h=args.horizon)
    f = parse_function(args.f, args.horizon)
    _emit(mixing.mixing_report(f, ground, args.horizon))


def _cmd_mix_pair(args):
    g = parse_function(args.g, args.bound)
    xs, ys = mixing.antimix_pair(g, args.k)
    verify = mixing.antimix_verify(g, xs, ys, args.bound)
    _emit({"X": xs, "Y": ys, "verify": verify})


def _cmd_mix_slalom(args):
    if args.seed is not None:
        slalom = mixing.random_slalom(args.depth, args.seed)
    else:
        gaps = [int(x) for x in _split(args.gaps or "")] or mixing.minimal_gaps(args.depth)
        slalom = mixing.Slalom(tuple(gaps), tuple(() for _ in gaps))
    xs, ys, log = mixing.slalom_avoid(slalom, args.depth)
    _emit(
        {
            "gaps": list(slalom.gaps),
            "X": xs,
            "Y": ys,
            "levels": log,
            "check": mixing.slalom_check(slalom, xs, ys, args.depth),
        }
    )


def _cmd_mix_nest(args):
    groups = [
        [parse_set(p.strip()) for p in pair.split(",")] for pair in _split(args.splittings)
    ]
    blocks = mixing.nest(groups, args.n)
    ground = mixing.GroundFamily.of(
        [parse_set(s) for s in _split(args.ground)] if args.ground else [parse_set("omega")],
        h=args.horizon,
    )
    _emit(
        {
            "blocks": [str(b) for b in blocks],
            "report": mixing.splitting_report(blocks, ground, args.horizon),
        }
    )


def _cmd_mix_measure(args):
    eps, bound = mixing.measure_bound(parse_set(args.Y), args.n, args.k)
    _emit({"epsilon": eps, "bound": bound})


def _cmd_reduce_jtree(args):
    tree = _parse_tree(args.tree)
    image = reductions.j_tree(tree)
    _emit(
        {
            "nodes": sorted(sorted(map(list, image.nodes)), key=len),
            "depth": image.depth(),
            "certified": image.increasing,
        }
    )


def _cmd_reduce_edges(args):
    tree = _parse_tree(args.tree)
    edges = reductions.edge_graph(tree)
    _emit({"edges": sorted(sorted(e) for e in edges)})


def _cmd_reduce_clopen(args):
    code = reductions.ClopenCode.of(args.depth, _split(args.words or ""))
    pairs = reductions.clopen_to_aset(code, args.horizon)
    _emit(
        {
            "horizon": args.horizon,
            "measure": code.measure(),
            "pairs": sorted(map(list, pairs)),
        }
    )


def _cmd_reduce_i0(args):
    if args.seed is not None:
        a_set, xs, ys = reductions.seeded_instance(args.seed, side=args.side, bound=args.bound)
    else:
        a_set = {tuple(map(int, p.split(","))) for p in _split(args.A or "")}
        xs = [int(x) for x in _split(args.X)]
        ys = [int(y) for y in _split(args.Y)]
    out = reductions.i0_search(a_set, xs, ys)
    _emit(out)


def _cmd_rado_edge(args):
    from .rado import rado_edge

    _emit({"edge": rado_edge(args.m, args.n)})


def _cmd_rado_witness(args):
    from .rado import rado_witness

    a = [int(x) for x in args.a.split(",") if x != ""] if args.a else []
    b = [int(x) for x in args.b.split(",") if x != ""] if args.b else []
    _emit({"witness": rado_witness(a, b)})


def _cmd_rado_hom(args):
    from .rado import rado_homogeneous

    _emit({"kind": args.kind, "set": rado_homogeneous(args.kind, args.n)})


def _cmd_encode(args):
    from . import coding

    if args.decode is not None:
        value = coding.decode(args.coding, args.decode)
        if isinstance(value, Fraction):
            value = str(value)
        elif isinstance(value, tuple):
            value = list(value)
        _emit({"coding": args.coding, "code": args.decode, "value": value})
        return
    raw = args.value
    if args.coding in ("pair", "upair", "natseq"):
        obj = tuple(int(x) for x in raw.split(",") if x != "")
    elif args.coding in ("rational", "rational01"):
        obj = Fraction(raw)
    else:
        obj = raw
    _emit({"coding": args.coding, "value": raw, "code": coding.encode(args.coding, obj)})


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="adideals", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, horizon=True, seed=False, budget=False):
        if horizon:
            p.add_argument("--horizon", type=int, default=catalog.DEFAULT_HORIZON)
        if seed:
            p.add_argument("--seed", type=int, default=None)
        if budget:
            p.add_argument("--budget", type=int, default=64)
        p.add_argument("--format", choices=["json"], default="json")

    p = sub.add_parser("member", help="ideal membership verdict")
    p.add_argument("--ideal", required=True)
    p.add_argument("--set", required=True)
    common(p)
    p.set_defaults(fn=_cmd_member)

    p = sub.add_parser("diag", help="per-ideal window diagnostics")
    p.add_argument("--ideal", required=True)
    p.add_argument("--set", required=True)
    common(p)
    p.set_defaults(fn=_cmd_diag)

    p = sub.add_parser("talagrand", help="witness partition, optional verification")
    p.add_argument("--ideal", required=True)
    p.add_argument("--samples", default="")
    p.add_argument("--blocks", type=int, default=20)
    common(p)
    p.set_defaults(fn=_cmd_talagrand)

    p = sub.add_parser("dominate", help="a partition absorbing all inputs blockwise")
    p.add_argument("--partitions", required=True)
    p.add_argument("--blocks", type=int, default=12)
    common(p)
    p.set_defaults(fn=_cmd_dominate)

    adr = sub.add_parser("adr", help="almost-disjoint refinements").add_subparsers(
        dest="adr_command", required=True
    )
    p = adr.add_parser("greedy")
    p.add_argument("--ideal", required=True)
    p.add_argument("--family", required=True)
    common(p, budget=True)
    p.set_defaults(fn=_cmd_adr_greedy)
    p = adr.add_parser("upgrade")
    p.add_argument("--ideal", required=True)
    p.add_argument("--family", required=True)
    common(p, budget=True)
    p.set_defaults(fn=_cmd_adr_upgrade)
    p = adr.add_parser("forcing")
    p.add_argument("--ideal", required=True)
    p.add_argument("--family", required=True)
    p.add_argument("--requests", required=True)
    common(p, seed=True)
    p.set_defaults(fn=_cmd_adr_forcing)

    mix = sub.add_parser("mix", help="mixing-style constructions").add_subparsers(
        dest="mix_command", required=True
    )
    p = mix.add_parser("check")
    p.add_argument("--f", required=True)
    p.add_argument("--ground", required=True)
    common(p)
    p.set_defaults(fn=_cmd_mix_check)
    p = mix.add_parser("pair")
    p.add_argument("--g", required=True)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--bound", type=int, default=4096)
    common(p)
    p.set_defaults(fn=_cmd_mix_pair)
    p = mix.add_parser("slalom")
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--gaps", default="")
    common(p, seed=True)
    p.set_defaults(fn=_cmd_mix_slalom)
    p = mix.add_parser("nest")
    p.add_argument("--splittings", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ground", default="")
    common(p)
    p.set_defaults(fn=_cmd_mix_nest)
    p = mix.add_parser("measure-bound")
    p.add_argument("--Y", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    common(p)
    p.set_defaults(fn=_cmd_mix_measure)

    red = sub.add_parser("reduce", help="reduction maps on finite codes").add_subparsers(
        dest="reduce_command", required=True
    )
    p = red.add_parser("jtree")
    p.add_argument("--tree", required=True)
    common(p)
    p.set_defaults(fn=_cmd_reduce_jtree)
    p = red.add_parser("edges")
    p.add_argument("--tree", required=True)
    common(p)
    p.set_defaults(fn=_cmd_reduce_edges)
    p = red.add_parser("clopen")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--words", default="")
    common(p)
    p.set_defaults(fn=_cmd_reduce_clopen)
    p = red.add_parser("i0")
    p.add_argument("--A", default="")
    p.add_argument("--X", default="")
    p.add_argument("--Y", default="")
    p.add_argument("--side", type=int, default=12)
    p.add_argument("--bound", type=int, default=200)
    common(p, seed=True)
    p.set_defaults(fn=_cmd_reduce_i0)

    rado = sub.add_parser("rado", help="the BIT random graph").add_subparsers(
        dest="rado_command", required=True
    )
    p = rado.add_parser("edge")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    common(p, horizon=False)
    p.set_defaults(fn=_cmd_rado_edge)
    p = rado.add_parser("witness")
    p.add_argument("--a", default="")
    p.add_argument("--b", default="")
    common(p, horizon=False)
    p.set_defaults(fn=_cmd_rado_witness)
    p = rado.add_parser("hom")
    p.add_argument("--kind", choices=["clique", "independent"], required=True)
    p.add_argument("--n", type=int, required=True)
    common(p, horizon=False)
    p.set_defaults(fn=_cmd_rado_hom)

    p = sub.add_parser("encode", help="the pinned codings")
    p.add_argument("--coding", required=True)
    p.add_argument("--value", default="")
    p.add_argument("--decode", type=int, default=None)
    common(p, horizon=False)
    p.set_defaults(fn=_cmd_encode)

    return top


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        args.fn(args)
        return 0
    except DomainError as exc:
        print(json.dumps({"error": str(exc), "kind": "precondition"}), file=sys.stderr)
        return 1
    except InternalCheckError as exc:
        print(json.dumps({"error": str(exc), "kind": "internal"}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
