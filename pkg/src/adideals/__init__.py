"""adideals: ideals on the naturals made executable at desk scale.

Symbolic sets with exact windows, an ideal catalog with sound three-valued
membership, partition witnesses for meagerness, almost-disjoint refinements
(greedy and via a finite-condition forcing engine), mixing-real
constructions, and computable reduction maps, all checked by brute-force
oracles on small instances.
"""

from .errors import DomainError, InternalCheckError, WindowError
from .sets import (
    Affine, Ap, Blowup, Branch, Col, Diag, Diff, EnumImage, Factorials, Fin,
    Image, Inter, OMEGA, EVENS, ODDS, Powers, PredFile, Preimage, RadoHom,
    SetExpr, Squares, Union, contains, window,
)
from .catalog import (
    Certificate, IdealHandle, Verdict, fubini, generated_member, ideal,
    member, pseudo_union, restrict,
)
from .parser import parse_ideal, parse_partition, parse_set

__version__ = "0.1.0"

__all__ = [
    "Affine", "Ap", "Blowup", "Branch", "Certificate", "Col", "Diag", "Diff",
    "DomainError", "EnumImage", "EVENS", "Factorials", "Fin", "IdealHandle",
    "Image", "Inter", "InternalCheckError", "ODDS", "OMEGA", "Powers",
    "PredFile", "Preimage", "RadoHom", "SetExpr", "Squares", "Union",
    "Verdict", "WindowError", "contains", "fubini", "generated_member",
    "ideal", "member", "parse_ideal", "parse_partition", "parse_set",
    "pseudo_union", "restrict", "window",
]
