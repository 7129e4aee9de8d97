"""Exact derivation-based differential calculus on finite-dimensional algebras.

The layers, bottom up: exact cyclotomic linear algebra, algebras and
bimodules, derivations, Hochschild complexes, forms, geometric predicates
and connections, and rewriting for finitely presented algebras.
"""

from __future__ import annotations

from .algebra import (
    FDAlgebra,
    Ideal,
    dual_number_extension,
    function_algebra,
    ideal_closure,
    matrix_algebra,
    quotient_algebra,
    subalgebra,
    tensor_product,
)
from .cyclotomic import field
from .derivations import derivations, inner_derivations, out
from .errors import NCGeomError
from .geometry import quotient_manifold_check, submanifold_check
from .io import load_fixture, parse_algebra_file

__version__ = "0.1.0"

__all__ = [
    "FDAlgebra",
    "Ideal",
    "NCGeomError",
    "derivations",
    "dual_number_extension",
    "field",
    "function_algebra",
    "ideal_closure",
    "inner_derivations",
    "load_fixture",
    "matrix_algebra",
    "out",
    "parse_algebra_file",
    "quotient_algebra",
    "quotient_manifold_check",
    "subalgebra",
    "submanifold_check",
    "tensor_product",
]
