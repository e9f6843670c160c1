"""Textual grammar for sets, partitions, functions, and ideal names.

Whitespace-separated s-expressions.  Sets:

    omega | evens | odds | squares | factorials | diag
    (fin 1 2 3) | (ap a d) | (powers b) | (col k) | (branch 1011)
    (rado-hom clique 3) | (union A B) | (inter A B) | (diff A B)
    (image (affine a b) A) | (preimage (affine a b) A)
    (enum-image A B) | (blowup A P) | (pred-file path)

Partitions:

    dyadic | triangular | pair-triangles | diag-cols
    (width w [start]) | (boundaries b0 b1 ... [tail w])
    (explicit (0) (1 2) tail 3) | (dyadic-trace Y)

Ideals:

    Fin | Z | W | ED | EDfin | Ran | Gfc | Gc | Solecki | Nwd | trN | Conv
    | Farah | I0 | FinxFin | Finx0 | 0xFin | summable | summable[const:3/2]
    | density[dyadic] | restrict(I, S) | fubini(Fin, Fin)
"""

from __future__ import annotations

import re

from . import catalog, partitions as parts, sets
from .errors import DomainError

_ATOMS = {
    "omega": sets.OMEGA,
    "ω": sets.OMEGA,
    "evens": sets.EVENS,
    "odds": sets.ODDS,
    "squares": sets.Squares(),
    "factorials": sets.Factorials(),
    "diag": sets.Diag(),
}


def _tokenize(text: str) -> list[str]:
    return re.findall(r"\(|\)|[^\s()]+", text)


def _read(tokens: list[str], pos: int):
    if pos >= len(tokens):
        raise DomainError("unexpected end of expression")
    tok = tokens[pos]
    if tok == "(":
        items = []
        pos += 1
        while pos < len(tokens) and tokens[pos] != ")":
            node, pos = _read(tokens, pos)
            items.append(node)
        if pos >= len(tokens):
            raise DomainError("missing closing parenthesis")
        return items, pos + 1
    if tok == ")":
        raise DomainError(f"unexpected ')' at token {pos}")
    return tok, pos + 1


def _nat(tok) -> int:
    if not isinstance(tok, str) or not tok.lstrip("-").isdigit():
        raise DomainError(f"natural number expected, got {tok!r}")
    v = int(tok)
    if v < 0:
        raise DomainError(f"natural number expected, got {v}")
    return v


def _build_set(node) -> sets.SetExpr:
    if isinstance(node, str):
        if node in _ATOMS:
            return _ATOMS[node]
        raise DomainError(f"unknown set atom {node!r}")
    if not node:
        raise DomainError("empty expression")
    head = node[0]
    args = node[1:]
    if head == "fin":
        return sets.Fin(_nat(a) for a in args)
    if head == "ap":
        return sets.Ap(_nat(args[0]), _nat(args[1]))
    if head == "powers":
        return sets.Powers(_nat(args[0]))
    if head == "col":
        return sets.Col(_nat(args[0]))
    if head == "branch":
        word = args[0] if args else ""
        return sets.Branch("" if word == "-" else word)
    if head == "rado-hom":
        return sets.RadoHom(args[0], _nat(args[1]))
    if head in ("union", "inter", "diff"):
        cls = {"union": sets.Union, "inter": sets.Inter, "diff": sets.Diff}[head]
        return cls(_build_set(args[0]), _build_set(args[1]))
    if head in ("image", "preimage"):
        fn = _build_affine(args[0])
        cls = sets.Image if head == "image" else sets.Preimage
        return cls(fn, _build_set(args[1]))
    if head == "enum-image":
        return sets.EnumImage(_build_set(args[0]), _build_set(args[1]))
    if head == "blowup":
        return sets.Blowup(_build_set(args[0]), _build_partition(args[1]))
    if head == "pred-file":
        return sets.PredFile(args[0])
    raise DomainError(f"unknown set constructor {head!r}")


def _build_affine(node) -> sets.Affine:
    if isinstance(node, list) and node and node[0] == "affine":
        return sets.Affine(_nat(node[1]), _nat(node[2]))
    if isinstance(node, str) and node.startswith("+"):
        return sets.Affine(1, _nat(node[1:]))
    raise DomainError(f"function expression expected, got {node!r}")


def _build_partition(node) -> parts.Partition:
    if isinstance(node, str):
        if node == "dyadic":
            return parts.dyadic()
        if node == "triangular":
            return parts.triangular()
        if node == "pair-triangles":
            return parts.PairTriangles()
        if node == "diag-cols":
            return parts.DiagColumns()
        raise DomainError(f"unknown partition {node!r}")
    head, args = node[0], node[1:]
    if head == "width":
        return parts.width(_nat(args[0]), _nat(args[1]) if len(args) > 1 else 0)
    if head == "boundaries":
        if len(args) >= 2 and args[-2] == "tail":
            return parts.from_boundaries([_nat(a) for a in args[:-2]], _nat(args[-1]))
        return parts.from_boundaries([_nat(a) for a in args])
    if head == "explicit":
        if "tail" not in args:
            raise DomainError("explicit partitions need a tail width")
        cut = args.index("tail")
        blocks = [[_nat(x) for x in blk] for blk in args[:cut]]
        return parts.explicit_prefix(blocks, _nat(args[cut + 1]))
    if head == "dyadic-trace":
        return parts.dyadic_trace(_build_set(args[0]))
    raise DomainError(f"unknown partition constructor {head!r}")


def parse_set(text: str) -> sets.SetExpr:
    tokens = _tokenize(text)
    node, pos = _read(tokens, 0)
    if pos != len(tokens):
        raise DomainError(f"trailing tokens after position {pos} in {text!r}")
    try:
        return _build_set(node)
    except IndexError:
        raise DomainError(f"too few arguments in {text!r}") from None


def parse_partition(text: str) -> parts.Partition:
    tokens = _tokenize(text)
    node, pos = _read(tokens, 0)
    if pos != len(tokens):
        raise DomainError(f"trailing tokens after position {pos} in {text!r}")
    try:
        return _build_partition(node)
    except IndexError:
        raise DomainError(f"too few arguments in {text!r}") from None


def parse_function(text: str, horizon: int):
    """Function vocabulary for reports: identity | (affine a b) | (divfloor d)
    | (const c) | (blockindex P)."""
    from .mixing import FunctionWindow

    tokens = _tokenize(text)
    node, _ = _read(tokens, 0)
    if node == "identity":
        return FunctionWindow.tabulate(lambda n: n, horizon)
    if isinstance(node, list) and node:
        if node[0] == "affine":
            fn = sets.Affine(_nat(node[1]), _nat(node[2]))
            return FunctionWindow.tabulate(fn, horizon)
        if node[0] == "divfloor":
            d = _nat(node[1])
            if d < 1:
                raise DomainError("divfloor needs a positive divisor")
            return FunctionWindow.tabulate(lambda n: n // d, horizon)
        if node[0] == "const":
            c = _nat(node[1])
            return FunctionWindow.tabulate(lambda n: c, horizon)
    raise DomainError(f"unknown function expression {text!r}")


def parse_ideal(text: str) -> catalog.IdealHandle:
    text = text.strip()
    m = re.fullmatch(r"restrict\((.*),\s*(.*)\)", text, re.DOTALL)
    if m:
        return catalog.restrict(parse_ideal(m.group(1)), parse_set(m.group(2)))
    m = re.fullmatch(r"fubini\(([^,]*),\s*(.*)\)", text)
    if m:
        return catalog.fubini(m.group(1).strip(), m.group(2).strip())
    m = re.fullmatch(r"(\w+)\[(.*)\]", text)
    if m:
        name, param = m.group(1).lower(), m.group(2)
        if name == "summable":
            if param.startswith("const:"):
                from fractions import Fraction

                return catalog.ideal("summable", weight=catalog.weight_constant(Fraction(param[6:])))
            if param.startswith("file:"):
                return catalog.ideal("summable", weight=catalog.weight_from_file(param[5:]))
            return catalog.ideal("summable")
        if name == "density":
            return catalog.ideal("density", partition=parse_partition(param))
        raise DomainError(f"unknown parametrized ideal {text!r}")
    return catalog.ideal(text)
