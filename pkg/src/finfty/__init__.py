"""Exact algebra over the field at infinity F_inf = {-1, 0, 1}."""

from .scalars import (
    FINF,
    Cyclotomic,
    FInfinity,
    GroupSemifield,
    LexMax,
    Scalar,
    Semifield,
    SemifieldError,
    cyclotomic,
    lexmax,
    semifield_make,
)
from .poly import Polynomial, Ring, poly_add, poly_mul, poly_scale, polynomial_ring, substitute
from .structures import (
    TOP,
    AxiomError,
    FiniteStructure,
    StructureError,
    build_structure,
    dual_module,
    hom_extend,
    join,
    module_dimension,
    natural_order,
    polygon_module,
)

__all__ = [
    "FINF", "Cyclotomic", "FInfinity", "GroupSemifield", "LexMax", "Scalar", "Semifield",
    "SemifieldError", "cyclotomic", "lexmax", "semifield_make",
    "Polynomial", "Ring", "poly_add", "poly_mul", "poly_scale", "polynomial_ring", "substitute",
    "TOP", "AxiomError", "FiniteStructure", "StructureError", "build_structure", "dual_module",
    "hom_extend", "join", "module_dimension", "natural_order", "polygon_module",
]
