"""Chebyshev polynomials and the closed form of ``(x-lam)**d [++]_d (x-mu)**d``.

Also grid checks of the inequalities that bound the Cauchy transform of
that closed form. Grids are deterministic (log-spaced, documented endpoints)
so a failing point is reproducible.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from finfree.errors import DomainError
from finfree.poly import Polynomial, compose_linear, evaluate, square_substitute, to_fraction
from finfree.transforms import ABS_TOL, BoundReport, cauchy_transform

__all__ = [
    "ChebKind",
    "ChebFamily",
    "cheb_U",
    "cheb_T",
    "rect_cheb",
    "rational_sqrt",
    "rect_cheb_via_U",
    "rect_cheb_scaled",
    "default_grid",
    "check_cheby_barrier",
    "check_cheby_ratio",
    "check_coth_convexity",
    "check_p1q1_cauchy",
]


class ChebKind(enum.Enum):
    FIRST = "T"
    SECOND = "U"


@dataclass(frozen=True)
class ChebFamily:
    kind: ChebKind
    d: int

    def polynomial(self) -> Polynomial:
        return cheb_T(self.d) if self.kind is ChebKind.FIRST else cheb_U(self.d)


_X2 = Polynomial([0, 2])


@lru_cache(maxsize=None)
def cheb_U(d: int) -> Polynomial:
    """Second kind: ``U_0 = 1``, ``U_1 = 2x``, ``U_d = 2x U_{d-1} - U_{d-2}``."""
    if d < 0:
        raise ValueError("d must be nonnegative")
    if d == 0:
        return Polynomial([1])
    if d == 1:
        return _X2
    return _X2 * cheb_U(d - 1) - cheb_U(d - 2)


@lru_cache(maxsize=None)
def cheb_T(d: int) -> Polynomial:
    """First kind: ``T_0 = 1``, ``T_1 = x``, ``T_d = 2x T_{d-1} - T_{d-2}``."""
    if d < 0:
        raise ValueError("d must be nonnegative")
    if d == 0:
        return Polynomial([1])
    if d == 1:
        return Polynomial([0, 1])
    return _X2 * cheb_T(d - 1) - cheb_T(d - 2)


def rect_cheb(d: int, lam, mu) -> Polynomial:
    """``q_0 = 1``, ``q_1 = x - (lam+mu)``, ``q_d = (x - (lam+mu)) q_{d-1} - lam mu q_{d-2}``."""
    lam, mu = to_fraction(lam), to_fraction(mu)
    if lam < 0 or mu < 0:
        raise DomainError("lam and mu must be nonnegative")
    if d < 0:
        raise ValueError("d must be nonnegative")
    lin = Polynomial([-(lam + mu), 1])
    prev, cur = Polynomial([1]), lin
    if d == 0:
        return prev
    for _ in range(d - 1):
        prev, cur = cur, lin * cur - prev * (lam * mu)
    return cur


def rational_sqrt(x) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if irrational."""
    x = to_fraction(x)
    if x < 0:
        return None
    n, m = x.numerator, x.denominator
    rn, rm = math.isqrt(n), math.isqrt(m)
    if rn * rn == n and rm * rm == m:
        return Fraction(rn, rm)
    return None


def rect_cheb_via_U(d: int, lam, mu) -> Polynomial:
    """``(lam mu)**(d/2) U_d((x - (lam+mu)) / (2 sqrt(lam mu)))``; needs ``lam mu`` a rational square."""
    lam, mu = to_fraction(lam), to_fraction(mu)
    s = rational_sqrt(lam * mu)
    if s is None or s == 0:
        raise DomainError("exact closed form needs lam*mu to be a nonzero rational square")
    return compose_linear(cheb_U(d), 1 / (2 * s), -(lam + mu) / (2 * s)) * s**d


def rect_cheb_scaled(d: int, lam, mu) -> Polynomial:
    """``(lam mu)**(d/2) q^{1,1}_d(x/s - (sqrt(lam)-sqrt(mu))**2/s)`` with ``s = sqrt(lam mu)``.

    ``(sqrt(lam) - sqrt(mu))**2 = lam + mu - 2 s`` so only ``s`` needs to be rational.
    """
    lam, mu = to_fraction(lam), to_fraction(mu)
    s = rational_sqrt(lam * mu)
    if s is None or s == 0:
        raise DomainError("exact scaling needs lam*mu to be a nonzero rational square")
    return compose_linear(rect_cheb(d, 1, 1), 1 / s, -(lam + mu - 2 * s) / s) * s**d


# ---------------------------------------------------------------------------
# grid checks


def default_grid(check: str, lam=1, mu=1, n: int = 50) -> list[float]:
    """Deterministic log-spaced grid for a named check.

    ``barrier``/``ratio``: ``1 + logspace(-3, 2)``; ``coth``:
    ``logspace(-3, log10(0.999))``; ``p1q1``: ``edge * (1 + logspace(-3, 1))``
    with ``edge = sqrt(lam) + sqrt(mu)``.
    """
    if check in ("barrier", "ratio"):
        pts = 1.0 + np.logspace(-3, 2, n)
    elif check == "coth":
        pts = np.logspace(-3, math.log10(0.999), n)
    elif check == "p1q1":
        edge = math.sqrt(float(lam)) + math.sqrt(float(mu))
        pts = edge * (1.0 + np.logspace(-3, 1, n))
    else:
        raise ValueError(f"unknown check {check!r}")
    return [float(v) for v in pts]


def check_cheby_barrier(d: int, t_grid) -> list[BoundReport]:
    """``(1/d) U_d'(t) / U_d(t) < 1 / sqrt(t**2 - 1)`` for ``t > 1``."""
    if d < 1:
        raise ValueError("d must be at least 1")
    u = cheb_U(d)
    out = []
    for t in t_grid:
        if not t > 1:
            raise DomainError(f"t={t} must exceed 1")
        lhs = cauchy_transform(u, t)
        rhs = 1.0 / math.sqrt(t * t - 1.0)
        out.append(BoundReport.compare("cheby_barrier", lhs, rhs, ABS_TOL, d, t))
    return out


def check_cheby_ratio(d: int, x_grid) -> list[BoundReport]:
    """``T_{d+1}(x) / U_d(x) < d/(d+1) sqrt(x**2-1) + x/(d+1)``; equality at ``d = 0``."""
    if d < 0:
        raise ValueError("d must be nonnegative")
    t, u = cheb_T(d + 1), cheb_U(d)
    out = []
    for x in x_grid:
        if not x > 1:
            raise DomainError(f"x={x} must exceed 1")
        xf = Fraction(x)
        lhs = float(evaluate(t, xf) / evaluate(u, xf))
        rhs = d / (d + 1) * math.sqrt(x * x - 1.0) + x / (d + 1)
        out.append(BoundReport.compare("cheby_ratio", lhs, rhs, ABS_TOL, d, x))
    return out


def _coth_f(alpha: float, t: float) -> float:
    # (1 + e^{-a/t}) / (1 - e^{-a/t}) = coth(a / (2t))
    return 1.0 / math.tanh(alpha / (2.0 * t))


def check_coth_convexity(alpha: float, t_grid) -> list[BoundReport]:
    """``F(t) < (1 - t) + t F(1)`` on ``(0, 1)`` for ``F(t) = coth(alpha / 2t)``."""
    if not alpha > 0:
        raise DomainError("alpha must be positive")
    f1 = _coth_f(alpha, 1.0)
    out = []
    for t in t_grid:
        if not 0 < t < 1:
            raise DomainError(f"t={t} must lie in (0, 1)")
        out.append(BoundReport.compare("coth_convexity", _coth_f(alpha, t), (1 - t) + t * f1, ABS_TOL, alpha, t))
    return out


def check_p1q1_cauchy(d: int, lam, mu, t_grid) -> list[BoundReport]:
    """``G_{S q}(t) < t / sqrt((t**2 - (lam+mu))**2 - 4 lam mu)`` for ``t > sqrt(lam) + sqrt(mu)``."""
    sq = square_substitute(rect_cheb(d, lam, mu))
    lam_f, mu_f = float(lam), float(mu)
    edge = math.sqrt(lam_f) + math.sqrt(mu_f)
    out = []
    for t in t_grid:
        if not t > edge:
            raise DomainError(f"t={t} lies inside the spectrum (edge {edge})")
        lhs = cauchy_transform(sq, t)
        rhs = t / math.sqrt((t * t - (lam_f + mu_f)) ** 2 - 4 * lam_f * mu_f)
        out.append(BoundReport.compare("p1q1_cauchy", lhs, rhs, ABS_TOL, d, t))
    return out
