"""Finite Cauchy, R, M and S transforms and root-bound checkers.

Inverse transforms are computed algebraically: the inverse Cauchy transform
at ``w`` is the largest root of ``p - p'/(w d)`` and the inverse M transform
is the largest root of ``(1 - x D/(d (w+1))) p``. No numerical inversion of
the forward transforms is ever done.

Checkers return :class:`BoundReport` records and never raise on a violated
inequality; callers decide what a violation means.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction

from finfree.convolve import (
    ConvolutionKind,
    asym_additive,
    sym_additive,
    sym_multiplicative,
)
from finfree.errors import DegreeError, DomainError, PoleError
from finfree.poly import (
    Polynomial,
    derivative,
    evaluate,
    laguerre_derivative,
    max_root,
    polar_derivative_at_zero,
    shift_op,
    square_substitute,
    to_fraction,
)

__all__ = [
    "BoundReport",
    "ABS_TOL",
    "cauchy_transform",
    "inverse_cauchy",
    "r_transform",
    "m_transform",
    "w_operator",
    "inverse_m",
    "s_transform_variant",
    "check_sqsum_bound",
    "check_recsum_bound",
    "check_mult_bound",
    "check_classical_bounds",
    "check_derivative_shift",
    "check_polar_derivative",
    "check_laguerre_shift",
]

ABS_TOL = 1e-9


@dataclass(frozen=True)
class BoundReport:
    """Outcome of checking ``lhs <= rhs``.

    ``param1``/``param2`` carry the grid coordinates (e.g. ``d`` and
    ``alpha``) for CSV output; they are not part of the JSON record.
    """

    context: str
    lhs: float
    rhs: float
    margin: float
    satisfied: bool
    tolerance: float
    param1: float | None = None
    param2: float | None = None

    @classmethod
    def compare(cls, context, lhs, rhs, tolerance=ABS_TOL, param1=None, param2=None):
        lhs, rhs = float(lhs), float(rhs)
        margin = rhs - lhs
        return cls(context, lhs, rhs, margin, bool(margin >= -tolerance), float(tolerance), param1, param2)

    def to_json(self) -> dict:
        d = asdict(self)
        del d["param1"], d["param2"]
        return d


def _degree_of(p: Polynomial) -> int:
    if p.is_zero or p.degree < 1:
        raise DegreeError("transforms need a polynomial of degree >= 1")
    return p.degree


# ---------------------------------------------------------------------------
# transforms


def cauchy_transform(p: Polynomial, x) -> float:
    """``p'(x) / (d p(x))``, evaluated exactly and then rounded."""
    d = _degree_of(p)
    xf = to_fraction(x)
    px = evaluate(p, xf)
    if px == 0:
        raise PoleError(f"Cauchy transform evaluated at a root x={x}")
    return float(evaluate(derivative(p), xf) / (d * px))


def _positive(w, name="w") -> Fraction:
    wf = to_fraction(w)
    if wf <= 0:
        raise DomainError(f"{name} must be positive, got {w}")
    return wf


def inverse_cauchy(p: Polynomial, w) -> float:
    """Largest ``x`` with ``cauchy_transform(p, x) == w``."""
    wf = _positive(w)
    d = _degree_of(p)
    return max_root(shift_op(p, 1 / (wf * d)))


def r_transform(p: Polynomial, w) -> float:
    return inverse_cauchy(p, w) - 1.0 / float(w)


def m_transform(p: Polynomial, z) -> float:
    return float(z) * cauchy_transform(p, z) - 1.0


def w_operator(p: Polynomial, w, d: int | None = None) -> Polynomial:
    """``(1 - x D / (d (w + 1))) p``; ``d`` may exceed ``deg p``."""
    wf = to_fraction(w)
    if wf == -1:
        raise DomainError("w = -1 is a pole of the operator")
    if d is None:
        d = p.degree
    if p.degree > d or d < 1:
        raise DegreeError(f"w_operator at d={d} of a degree {p.degree} polynomial")
    s = Fraction(1) / (d * (wf + 1))
    return Polynomial((1 - k * s) * c for k, c in enumerate(p.coeffs))


def _reject_monomial(p: Polynomial):
    if any(c != 0 for c in p.coeffs[:-1]):
        return
    raise DomainError("inverse M transform is infinite for c * x**d")


def inverse_m(p: Polynomial, w) -> float:
    """Largest ``z`` with ``m_transform(p, z) == w``."""
    wf = _positive(w)
    d = _degree_of(p)
    _reject_monomial(p)
    return max_root(w_operator(p, wf, d))


def s_transform_variant(p: Polynomial, w) -> float:
    """``w/(w+1) * inverse_m(p, w)``; equals ``lam`` for ``(x - lam)**d``."""
    wv = float(w)
    return wv / (wv + 1.0) * inverse_m(p, w)


# ---------------------------------------------------------------------------
# bound checkers


def _check_pair(p: Polynomial, q: Polynomial, d: int | None) -> int:
    if d is None:
        d = p.degree
    if p.degree != d or q.degree != d:
        raise DegreeError(f"bound checkers need deg p = deg q = d (got {p.degree}, {q.degree}, d={d})")
    if d < 1:
        raise DegreeError("d must be at least 1")
    return d


def check_sqsum_bound(p: Polynomial, q: Polynomial, alpha, d: int | None = None) -> BoundReport:
    """``maxroot(U_a(p [+] q)) + d a <= maxroot(U_a p) + maxroot(U_a q)``."""
    d = _check_pair(p, q, d)
    a = _positive(alpha, "alpha")
    r = sym_additive(p, q, d)
    lhs = max_root(shift_op(r, a)) + d * float(a)
    rhs = max_root(shift_op(p, a)) + max_root(shift_op(q, a))
    return BoundReport.compare("sqsum", lhs, rhs, ABS_TOL, d, float(a))


def check_recsum_bound(p: Polynomial, q: Polynomial, alpha, d: int | None = None) -> BoundReport:
    """``maxroot(U_a S(p [++] q)) <= maxroot(U_a S p) + maxroot(U_a S q) - 2 a d``."""
    d = _check_pair(p, q, d)
    a = _positive(alpha, "alpha")
    r = asym_additive(p, q, d)
    lhs = max_root(shift_op(square_substitute(r), a))
    rhs = (
        max_root(shift_op(square_substitute(p), a))
        + max_root(shift_op(square_substitute(q), a))
        - 2 * d * float(a)
    )
    return BoundReport.compare("recsum", lhs, rhs, ABS_TOL, d, float(a))


def check_mult_bound(p: Polynomial, q: Polynomial, w, d: int | None = None) -> BoundReport:
    """``S(p [x] q)(w) <= S(p)(w) * S(q)(w)`` with relative tolerance 1e-9."""
    d = _check_pair(p, q, d)
    wf = _positive(w)
    _reject_monomial(p)
    _reject_monomial(q)
    r = sym_multiplicative(p, q, d)
    lhs = s_transform_variant(r, wf)
    rhs = s_transform_variant(p, wf) * s_transform_variant(q, wf)
    return BoundReport.compare("mult", lhs, rhs, ABS_TOL * max(1.0, abs(rhs)), d, float(wf))


def check_classical_bounds(p: Polynomial, q: Polynomial, kind, d: int | None = None) -> BoundReport:
    """Walsh (``maxroot`` subadditive under [+]) or Szego (submultiplicative under [x])."""
    d = _check_pair(p, q, d)
    kind = ConvolutionKind.parse(kind)
    if kind is ConvolutionKind.SYM_ADDITIVE:
        lhs = max_root(sym_additive(p, q, d))
        rhs = max_root(p) + max_root(q)
        return BoundReport.compare("walsh", lhs, rhs, ABS_TOL, d)
    if kind is ConvolutionKind.SYM_MULTIPLICATIVE:
        r = sym_multiplicative(p, q, d)
        lhs = max_root(r)
        rhs = max_root(p) * max_root(q)
        return BoundReport.compare("szego", lhs, rhs, ABS_TOL * max(1.0, abs(rhs)), d)
    raise ValueError("no classical bound is implemented for the asymmetric convolution")



# ---------------------------------------------------------------------------
# auxiliary inequalities used inside the proofs of the bounds above


def check_derivative_shift(p: Polynomial, alpha) -> BoundReport:
    """``maxroot(U_a D p) <= maxroot(U_a p) - a``; equality for ``(x - lam)**d``."""
    if p.degree < 2:
        raise DegreeError("need degree >= 2")
    a = _positive(alpha, "alpha")
    lhs = max_root(shift_op(derivative(p), a))
    rhs = max_root(shift_op(p, a)) - float(a)
    return BoundReport.compare("derivP", lhs, rhs, ABS_TOL, p.degree, float(a))


def check_polar_derivative(p: Polynomial) -> BoundReport:
    """``maxroot(x p' - d p) <= maxroot(p)`` for ``p`` with positive roots."""
    d = _degree_of(p)
    if d < 2:
        raise DegreeError("need degree >= 2 (the polar derivative of a linear p is constant)")
    r = polar_derivative_at_zero(p, d)
    if r.is_zero or r.leading <= 0:
        raise DomainError("polar derivative needs p with positive roots and positive leading coefficient")
    lhs = max_root(r)
    rhs = max_root(p)
    return BoundReport.compare("polarDeriv", lhs, rhs, ABS_TOL, d)


def check_laguerre_shift(p: Polynomial, alpha) -> BoundReport:
    """``maxroot(U_a S(D x D p)) <= maxroot(U_a S p) - 2a``; equality at ``p = x**d``."""
    if p.degree < 2:
        raise DegreeError("need degree >= 2")
    a = _positive(alpha, "alpha")
    lhs = max_root(shift_op(square_substitute(laguerre_derivative(p)), a))
    rhs = max_root(shift_op(square_substitute(p), a)) - 2 * float(a)
    return BoundReport.compare("p1q0", lhs, rhs, ABS_TOL, p.degree, float(a))
