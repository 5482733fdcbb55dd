"""The three finite free convolutions.

Each additive convolution has two independent implementations: the
coefficient-weight form working on :class:`SignedCoeffs`, and an operator
form (derivatives of ``p`` for the symmetric sum, powers of the Laguerre
derivative ``D x D`` for the asymmetric sum). They must agree exactly.

When one argument has degree below ``d`` the higher-degree argument is
reduced one step at a time:

* ``p [+]_d q = (1/d) (D p) [+]_{d-1} q``
* ``p [x]_d q = (1/d) (x D p - d p) [x]_{d-1} q``
* ``p [++]_d q = (1/d**2) (D x D p) [++]_{d-1} q``

These are the same as zero-padding ``q`` in the weight formulas.
"""
from __future__ import annotations

import enum
import threading
from fractions import Fraction
from math import comb, factorial

from finfree.errors import DegreeError, DomainError
from finfree.poly import (
    Polynomial,
    SignedCoeffs,
    derivative,
    is_real_rooted,
    laguerre_derivative,
)

__all__ = [
    "ConvolutionKind",
    "sym_additive",
    "sym_additive_deriv_form",
    "sym_multiplicative",
    "asym_additive",
    "asym_additive_laguerre_form",
    "convolve",
    "additive_weights",
    "has_nonnegative_roots",
]


class ConvolutionKind(enum.Enum):
    SYM_ADDITIVE = "sym-add"
    SYM_MULTIPLICATIVE = "sym-mult"
    ASYM_ADDITIVE = "asym-add"

    @classmethod
    def parse(cls, name) -> ConvolutionKind:
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("_", "-")
        aliases = {
            "sym-add": cls.SYM_ADDITIVE, "symadditive": cls.SYM_ADDITIVE,
            "sym-mult": cls.SYM_MULTIPLICATIVE, "symmultiplicative": cls.SYM_MULTIPLICATIVE,
            "asym-add": cls.ASYM_ADDITIVE, "asymadditive": cls.ASYM_ADDITIVE,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown convolution kind {name!r}") from None


# weight tables (d-i)!(d-j)!/(d!(d-i-j)!) keyed by d, built once per d
_WEIGHTS: dict[int, tuple[tuple[Fraction, ...], ...]] = {}
_WEIGHTS_LOCK = threading.Lock()


def additive_weights(d: int) -> tuple[tuple[Fraction, ...], ...]:
    """``w[i][j]`` for ``i + j <= d``; shared, read-only after first build."""
    table = _WEIGHTS.get(d)
    if table is not None:
        return table
    with _WEIGHTS_LOCK:
        table = _WEIGHTS.get(d)
        if table is None:
            fd = factorial(d)
            table = tuple(
                tuple(
                    Fraction(factorial(d - i) * factorial(d - j), fd * factorial(d - i - j))
                    for j in range(d + 1 - i)
                )
                for i in range(d + 1)
            )
            _WEIGHTS[d] = table
    return table


def _check_degrees(p: Polynomial, q: Polynomial, d: int | None) -> int:
    if d is None:
        d = max(p.degree, q.degree)
    if d < 0:
        raise DegreeError("d must be nonnegative")
    if max(p.degree, q.degree) > d:
        raise DegreeError(f"d={d} is below the input degrees {p.degree}, {q.degree}")
    if p.degree != d and q.degree != d:
        raise DegreeError(f"at least one input must have degree d={d}")
    return d


def has_nonnegative_roots(p: Polynomial) -> bool:
    """Exact test for a real-rooted ``p``: every signed coefficient has the sign of ``a_0``."""
    a = SignedCoeffs.from_polynomial(p).a
    sign = 1 if a[0] > 0 else -1
    return all(sign * ai >= 0 for ai in a)


def _validate(p: Polynomial, q: Polynomial, nonnegative: bool) -> None:
    for name, r in (("p", p), ("q", q)):
        if r.is_zero or not is_real_rooted(r):
            raise DomainError(f"{name} is not real rooted")
        if nonnegative and not has_nonnegative_roots(r):
            raise DomainError(f"{name} has a negative root")


def _weighted(p: Polynomial, q: Polynomial, d: int, power: int) -> Polynomial:
    a = SignedCoeffs.from_polynomial(p, d).a
    b = SignedCoeffs.from_polynomial(q, d).a
    w = additive_weights(d)
    c = []
    for k in range(d + 1):
        acc = Fraction(0)
        for i in range(k + 1):
            j = k - i
            if a[i] and b[j]:
                acc += w[i][j] ** power * a[i] * b[j]
        c.append(acc)
    return SignedCoeffs(d, tuple(c)).to_polynomial()


def sym_additive(p: Polynomial, q: Polynomial, d: int | None = None, validate: bool = False) -> Polynomial:
    """Symmetric additive convolution ``p [+]_d q`` (weight form)."""
    d = _check_degrees(p, q, d)
    if validate:
        _validate(p, q, nonnegative=False)
    if p.degree != d:
        p, q = q, p
    while q.degree < d:
        p = derivative(p) / d
        d -= 1
    return _weighted(p, q, d, 1)


def sym_additive_deriv_form(p: Polynomial, q: Polynomial, d: int) -> Polynomial:
    """``(1/d!) sum_i (d-i)! [x**(d-i)]q * D**i p`` for ``deg p = deg q = d``."""
    if p.degree != d or q.degree != d:
        raise DegreeError("derivative form needs deg p = deg q = d")
    out = Polynomial()
    dp = p
    for i in range(d + 1):
        c = q.coeff(d - i)
        if c:
            out = out + dp * (factorial(d - i) * c)
        dp = derivative(dp)
    return out / factorial(d)


def sym_multiplicative(p: Polynomial, q: Polynomial, d: int | None = None, validate: bool = False) -> Polynomial:
    """Symmetric multiplicative convolution ``p [x]_d q``: ``c_i = a_i b_i / C(d, i)``."""
    d = _check_degrees(p, q, d)
    if validate:
        _validate(p, q, nonnegative=True)
    if p.degree != d:
        p, q = q, p
    while q.degree < d:
        # (1/d)(x D p - d p); p may fall more than one degree (e.g. p = x**d gives 0)
        p = Polynomial((k - d) * c for k, c in enumerate(p.coeffs)) / d
        d -= 1
    a = SignedCoeffs.from_polynomial(p, d).a
    b = SignedCoeffs.from_polynomial(q, d).a
    c = tuple(a[i] * b[i] / comb(d, i) for i in range(d + 1))
    return SignedCoeffs(d, c).to_polynomial()


def asym_additive(p: Polynomial, q: Polynomial, d: int | None = None, validate: bool = False) -> Polynomial:
    """Asymmetric additive convolution ``p [++]_d q`` (squared-weight form)."""
    d = _check_degrees(p, q, d)
    if validate:
        _validate(p, q, nonnegative=True)
    if p.degree != d:
        p, q = q, p
    while q.degree < d:
        p = laguerre_derivative(p) / (d * d)
        d -= 1
    return _weighted(p, q, d, 2)


def asym_additive_laguerre_form(p: Polynomial, q: Polynomial, d: int) -> Polynomial:
    """``(1/d!)**2 sum_i ((d-i)!)**2 [x**(d-i)]q * (D x D)**i p``."""
    if p.degree != d or q.degree != d:
        raise DegreeError("Laguerre form needs deg p = deg q = d")
    out = Polynomial()
    lp = p
    for i in range(d + 1):
        c = q.coeff(d - i)
        if c:
            out = out + lp * (factorial(d - i) ** 2 * c)
        lp = laguerre_derivative(lp)
    return out / factorial(d) ** 2


_DISPATCH = {
    ConvolutionKind.SYM_ADDITIVE: sym_additive,
    ConvolutionKind.SYM_MULTIPLICATIVE: sym_multiplicative,
    ConvolutionKind.ASYM_ADDITIVE: asym_additive,
}


def convolve(kind, p: Polynomial, q: Polynomial, d: int | None = None, validate: bool = False) -> Polynomial:
    return _DISPATCH[ConvolutionKind.parse(kind)](p, q, d, validate=validate)
