"""Finite effect algebras, their observables, and presheaves on finite Boolean algebras."""
from .core import (
    AxiomError, FiniteEffectAlgebra, FormatError, Violation, boolean, chain,
    derive_structure, horizontal_sum, interval_vector, is_refinement, is_subalgebra,
    make_standard, mo, one_element, product, sum_family, validate,
)
from .kernels import BACKEND

__all__ = [
    "AxiomError", "FiniteEffectAlgebra", "FormatError", "Violation", "boolean", "chain",
    "derive_structure", "horizontal_sum", "interval_vector", "is_refinement",
    "is_subalgebra", "make_standard", "mo", "one_element", "product", "sum_family",
    "validate", "BACKEND",
]
__version__ = "0.1.0"
