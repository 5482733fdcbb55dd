"""Finite free convolutions of real-rooted polynomials, their transforms and root bounds."""
from finfree.convolve import (
    ConvolutionKind,
    asym_additive,
    asym_additive_laguerre_form,
    convolve,
    sym_additive,
    sym_additive_deriv_form,
    sym_multiplicative,
)
from finfree.errors import BudgetError, DegreeError, DomainError, FinFreeError, PoleError
from finfree.poly import (
    Polynomial,
    RootList,
    SignedCoeffs,
    all_roots,
    from_roots,
    is_real_rooted,
    max_root,
    min_root,
    poly_from_json,
    poly_to_json,
)
from finfree.transforms import BoundReport

__version__ = "0.1.0"

__all__ = [
    "ConvolutionKind",
    "asym_additive",
    "asym_additive_laguerre_form",
    "convolve",
    "sym_additive",
    "sym_additive_deriv_form",
    "sym_multiplicative",
    "BudgetError",
    "DegreeError",
    "DomainError",
    "FinFreeError",
    "PoleError",
    "Polynomial",
    "RootList",
    "SignedCoeffs",
    "all_roots",
    "from_roots",
    "is_real_rooted",
    "max_root",
    "min_root",
    "poly_from_json",
    "poly_to_json",
    "BoundReport",
]
