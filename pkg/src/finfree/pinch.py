"""Pinching two roots of a real-rooted polynomial together.

Given ``p`` with roots ``lam_1 >= ... >= lam_d`` and an index ``k`` with
``lam_1 > lam_k``, replace ``lam_1`` and ``lam_k`` by a double root ``mu``
chosen so that ``maxroot(p - alpha p')`` does not move. The remainder
``p_hat = p - p_til`` has degree ``d - 1`` and a root ``rho > lam_1``.

Precision boundary: ``t`` and the roots are doubles (held as exact binary
fractions); ``mu`` and ``rho`` are then evaluated exactly from them, so
``p_til + p_hat`` reproduces ``p`` up to the rounding of the roots,
typically ~1e-15 relative to the coefficient scale.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from finfree.convolve import has_nonnegative_roots
from finfree.errors import DegreeError, DomainError
from finfree.poly import (
    Polynomial,
    all_roots,
    from_roots,
    max_root,
    shift_op,
    square_substitute,
    to_fraction,
)
from finfree.transforms import w_operator

__all__ = ["PinchResult", "pinch", "mult_pinch", "rec_pinch", "decomposition_error"]


@dataclass(frozen=True)
class PinchResult:
    """``p = p_til + p_hat`` with ``maxroot(U_alpha .)`` preserved at ``t``.

    ``lam1``/``lamk`` are the two roots that were pinched and ``alpha`` the
    shift parameter actually used (for the corollaries this is derived from
    ``w`` or from the squared-variable barrier).
    """

    p_til: Polynomial
    p_hat: Polynomial
    mu: float
    rho: float
    t: float
    alpha: float
    lam1: float
    lamk: float
    k: int


def _roots_for_pinch(p: Polynomial):
    if p.is_zero or p.degree < 2:
        raise DegreeError("pinching needs degree >= 2")
    roots = list(all_roots(p))
    if roots[0] == roots[-1]:
        raise DomainError("pinching needs at least two distinct roots")
    return roots


def pinch(p: Polynomial, alpha, k: int | None = None) -> PinchResult:
    """Pinch ``lam_1`` with ``lam_k`` (1-indexed, roots sorted descending).

    ``k`` defaults to ``d``, the smallest root.
    """
    roots = _roots_for_pinch(p)
    a = to_fraction(alpha)
    if a <= 0:
        raise DomainError("alpha must be positive")
    d = len(roots)
    if k is None:
        k = d
    if not 2 <= k <= d:
        raise ValueError(f"k must lie in 2..{d}, got {k}")
    lam1, lamk = roots[0], roots[k - 1]
    if not lam1 > lamk:
        raise DomainError(f"root {k} equals the largest root; nothing to pinch")
    t = max_root(shift_op(p, a))
    # mu and rho in exact arithmetic from the double inputs: the slope
    # 2 mu - lam1 - lamk gets tiny when t is far out, and rho cancels badly
    tf, l1, lk = Fraction(t), Fraction(lam1), Fraction(lamk)
    mu = tf - 2 / (1 / (tf - l1) + 1 / (tf - lk))
    slope = 2 * mu - (l1 + lk)
    rho = (mu * mu - l1 * lk) / slope
    rest = from_roots([Fraction(r) for i, r in enumerate(roots) if i not in (0, k - 1)])
    lc = p.leading
    x = Polynomial.x()
    p_til = rest * (x - mu) ** 2 * lc
    p_hat = rest * (x - rho) * (lc * slope)
    return PinchResult(p_til, p_hat, float(mu), float(rho), t, float(a), lam1, lamk, k)


def decomposition_error(p: Polynomial, res: PinchResult) -> float:
    """``max_i |[x^i](p_til + p_hat - p)| / max(1, max_i |[x^i]p|)``."""
    diff = res.p_til + res.p_hat - p
    scale = max(1.0, max(abs(float(c)) for c in p.coeffs))
    if diff.is_zero:
        return 0.0
    return max(abs(float(c)) for c in diff.coeffs) / scale


def _corollary_input(p: Polynomial, d: int | None) -> int:
    if d is None:
        d = p.degree
    if p.degree != d:
        raise DegreeError(f"expected degree {d}, got {p.degree}")
    _roots_for_pinch(p)
    if not has_nonnegative_roots(p):
        raise DomainError("p must have nonnegative roots")
    return d


def mult_pinch(p: Polynomial, w, d: int | None = None, k: int | None = None) -> PinchResult:
    """Pinch at ``alpha = t / (d (w+1))`` where ``t = maxroot(W_w p)``.

    Then ``U_alpha p`` and ``W_w p`` agree at ``x = t`` and the pinch keeps
    ``maxroot(W_w .)`` at ``t``.
    """
    wf = to_fraction(w)
    if wf <= 0:
        raise DomainError("w must be positive")
    d = _corollary_input(p, d)
    t = max_root(w_operator(p, wf, d))
    alpha = Fraction(t) / (d * (wf + 1))
    return pinch(p, alpha, k)


def rec_pinch(p: Polynomial, alpha, d: int | None = None, k: int | None = None) -> PinchResult:
    """Pinch at ``2 alpha t`` where ``t = maxroot(U_alpha S p)``.

    ``(U_alpha S p)(x) = (U_{2 alpha x} p)(x**2)``, so the pinch preserves
    ``maxroot(U_{2 alpha t} .) = t**2`` and hence ``maxroot(U_alpha S .) = t``.
    The returned ``t`` is the preserved root ``t**2`` of the unsquared barrier.
    """
    a = to_fraction(alpha)
    if a <= 0:
        raise DomainError("alpha must be positive")
    _corollary_input(p, d)
    t = max_root(shift_op(square_substitute(p), a))
    return pinch(p, 2 * a * Fraction(t), k)
