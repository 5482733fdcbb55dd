"""Exact polynomials over the rationals.

:class:`Polynomial` stores coefficients ascending in powers of ``x`` as
:class:`fractions.Fraction`. All arithmetic is exact; floats passed in are
converted with ``Fraction(float)``, which is lossless. Doubles only appear in
root finding (:func:`max_root`, :func:`all_roots`).

:class:`SignedCoeffs` is the alternate view used by the convolution formulas,
``p(x) = sum_i x**(d-i) * (-1)**i * a[i]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

from finfree import _kernels
from finfree.errors import DegreeError, DomainError

__all__ = [
    "Polynomial",
    "SignedCoeffs",
    "RootList",
    "to_fraction",
    "from_roots",
    "evaluate",
    "derivative",
    "shift_op",
    "square_substitute",
    "reverse",
    "polar_derivative_at_zero",
    "laguerre_derivative",
    "compose_linear",
    "poly_divmod",
    "poly_gcd",
    "squarefree_part",
    "squarefree_decomposition",
    "sturm_sequence",
    "count_real_roots",
    "is_real_rooted",
    "max_root",
    "min_root",
    "all_roots",
    "poly_to_json",
    "poly_from_json",
]


def to_fraction(x) -> Fraction:
    """Convert an int, Fraction, float or ``"num/den"`` string exactly."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, (float, np.floating)):
        if not math.isfinite(x):
            raise DomainError(f"non-finite value {x!r}")
        return Fraction(float(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to Fraction")


class Polynomial:
    """Immutable univariate polynomial with exact rational coefficients.

    ``coeffs[k]`` is the coefficient of ``x**k``. Trailing zeros are
    stripped, so the zero polynomial has ``coeffs == ()``; its ``degree`` is
    reported as 0 and :attr:`is_zero` is true.
    """

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable = ()):
        c = [to_fraction(v) for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(c)
        self._hash = None

    # -- construction -----------------------------------------------------
    @classmethod
    def constant(cls, c) -> Polynomial:
        return cls([c])

    @classmethod
    def monomial(cls, k: int, c=1) -> Polynomial:
        return cls([0] * k + [c])

    @classmethod
    def x(cls) -> Polynomial:
        return cls([0, 1])

    @classmethod
    def from_signed(cls, sc: SignedCoeffs) -> Polynomial:
        return sc.to_polynomial()

    # -- basic properties --------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return max(len(self.coeffs) - 1, 0)

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coeff(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def signed_coeffs(self, d: int | None = None) -> SignedCoeffs:
        return SignedCoeffs.from_polynomial(self, d)

    def monic(self) -> Polynomial:
        if self.is_zero:
            raise DomainError("zero polynomial has no monic normalization")
        lc = self.leading
        return Polynomial(c / lc for c in self.coeffs)

    def float_coeffs(self) -> np.ndarray:
        return np.array([float(c) for c in self.coeffs], dtype=np.float64)

    # -- arithmetic ----------------------------------------------------------
    def __add__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(self.coeff(k) + other.coeff(k) for k in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            if self.is_zero or other.is_zero:
                return Polynomial()
            out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                if a == 0:
                    continue
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
            return Polynomial(out)
        try:
            s = to_fraction(other)
        except TypeError:
            return NotImplemented
        return Polynomial(c * s for c in self.coeffs)

    __rmul__ = __mul__

    def __truediv__(self, other):
        s = to_fraction(other)
        if s == 0:
            raise ZeroDivisionError("polynomial divided by zero")
        return Polynomial(c / s for c in self.coeffs)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out, base = Polynomial([1]), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        try:
            return self.coeffs == Polynomial([other]).coeffs
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def __call__(self, x):
        return evaluate(self, x)

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        if self.is_zero:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = -c if c < 0 else c
            if k == 0:
                body = str(mag)
            else:
                body = "" if mag == 1 else f"{mag}*"
                body += "x" if k == 1 else f"x^{k}"
            terms.append((sign, body))
        first_sign, first = terms[0]
        s = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            s += f" {sign} {body}"
        return s


def _as_poly(v):
    if isinstance(v, Polynomial):
        return v
    try:
        return Polynomial([to_fraction(v)])
    except TypeError:
        return NotImplemented


@dataclass(frozen=True)
class SignedCoeffs:
    """``(a_0..a_d)`` with ``p(x) = sum_i x**(d-i) (-1)**i a_i``."""

    d: int
    a: tuple

    def __post_init__(self):
        if len(self.a) != self.d + 1:
            raise DegreeError(f"expected {self.d + 1} coefficients, got {len(self.a)}")

    @classmethod
    def from_polynomial(cls, p: Polynomial, d: int | None = None) -> SignedCoeffs:
        if d is None:
            d = p.degree
        if p.degree > d and not p.is_zero:
            raise DegreeError(f"degree {p.degree} polynomial viewed at d={d}")
        a = tuple((-1) ** i * p.coeff(d - i) for i in range(d + 1))
        return cls(d, a)

    def to_polynomial(self) -> Polynomial:
        c = [Fraction(0)] * (self.d + 1)
        for i, ai in enumerate(self.a):
            c[self.d - i] = (-1) ** i * to_fraction(ai)
        return Polynomial(c)


@dataclass(frozen=True)
class RootList:
    """Real roots sorted descending, repeated according to multiplicity."""

    roots: tuple

    def __post_init__(self):
        object.__setattr__(self, "roots", tuple(sorted((float(r) for r in self.roots), reverse=True)))

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    def __getitem__(self, i):
        return self.roots[i]


# ---------------------------------------------------------------------------
# constructors and operators


def from_roots(roots: Sequence) -> Polynomial:
    """Monic ``prod (x - r)``; exact for rational (and float) inputs."""
    c = [Fraction(1)]
    for r in roots:
        r = to_fraction(r)
        nxt = [Fraction(0)] * (len(c) + 1)
        for k, ck in enumerate(c):
            nxt[k + 1] += ck
            nxt[k] -= r * ck
        c = nxt
    return Polynomial(c)


def evaluate(p: Polynomial, x):
    """Horner evaluation. Exact for rational ``x``, float for float ``x``."""
    if isinstance(x, (float, np.floating)):
        acc = 0.0
        for c in reversed(p.coeffs):
            acc = acc * x + float(c)
        return acc
    x = to_fraction(x)
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def derivative(p: Polynomial) -> Polynomial:
    return Polynomial(k * c for k, c in enumerate(p.coeffs) if k > 0)


def shift_op(p: Polynomial, alpha) -> Polynomial:
    """``p - alpha * p'``."""
    alpha = to_fraction(alpha)
    return p - derivative(p) * alpha


def square_substitute(p: Polynomial) -> Polynomial:
    """``p(x**2)``."""
    c = [Fraction(0)] * (2 * len(p.coeffs) - 1) if p.coeffs else []
    for k, ck in enumerate(p.coeffs):
        c[2 * k] = ck
    return Polynomial(c)


def reverse(p: Polynomial, d: int) -> Polynomial:
    """``x**d * p(1/x)`` for ``deg p <= d``."""
    if not p.is_zero and p.degree > d:
        raise DegreeError(f"cannot reverse a degree {p.degree} polynomial at d={d}")
    return Polynomial(p.coeff(d - k) for k in range(d + 1))


def polar_derivative_at_zero(p: Polynomial, d: int) -> Polynomial:
    """``x p' - d p``. For ``(x - lam)**d`` this is ``lam d (x - lam)**(d-1)``."""
    if p.degree != d:
        raise DegreeError(f"polar derivative at d={d} of a degree {p.degree} polynomial")
    return Polynomial((k - d) * c for k, c in enumerate(p.coeffs))


def laguerre_derivative(p: Polynomial) -> Polynomial:
    """``D x D p``; maps ``x**k`` to ``k**2 x**(k-1)``."""
    return Polynomial(k * k * c for k, c in enumerate(p.coeffs) if k > 0)


def compose_linear(p: Polynomial, a, b) -> Polynomial:
    """``p(a*x + b)`` exactly."""
    lin = Polynomial([b, a])
    out = Polynomial()
    for c in reversed(p.coeffs):
        out = out * lin + c
    return out


# ---------------------------------------------------------------------------
# division, gcd, Sturm sequences


def poly_divmod(p: Polynomial, q: Polynomial) -> tuple[Polynomial, Polynomial]:
    if q.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    r = list(p.coeffs)
    dq = len(q.coeffs) - 1
    lq = q.coeffs[-1]
    if len(r) - 1 < dq:
        return Polynomial(), p
    quot = [Fraction(0)] * (len(r) - dq)
    for k in range(len(r) - 1 - dq, -1, -1):
        f = r[k + dq] / lq
        quot[k] = f
        if f:
            for j in range(dq + 1):
                r[k + j] -= f * q.coeffs[j]
    return Polynomial(quot), Polynomial(r[:dq])


def poly_gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Monic gcd (the zero polynomial if both inputs are zero)."""
    a, b = p, q
    while not b.is_zero:
        a, b = b, poly_divmod(a, b)[1]
    return a.monic() if not a.is_zero else a


@lru_cache(maxsize=4096)
def squarefree_part(p: Polynomial) -> Polynomial:
    """``p / gcd(p, p')`` normalized to be monic."""
    if p.is_zero:
        raise DomainError("zero polynomial")
    if p.degree <= 1:
        return p.monic()
    g = poly_gcd(p, derivative(p))
    return poly_divmod(p, g)[0].monic()


def squarefree_decomposition(p: Polynomial) -> list[tuple[Polynomial, int]]:
    """Yun's algorithm: monic, pairwise coprime ``f_i`` with ``p ~ prod f_i**i``."""
    if p.is_zero:
        raise DomainError("zero polynomial")
    out = []
    if p.degree == 0:
        return out
    dp = derivative(p)
    a0 = poly_gcd(p, dp)
    b = poly_divmod(p, a0)[0]
    c = poly_divmod(dp, a0)[0]
    d = c - derivative(b)
    i = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        if a.degree > 0:
            out.append((a, i))
        b = poly_divmod(b, a)[0]
        c = poly_divmod(d, a)[0]
        d = c - derivative(b)
        i += 1
    return out


def sturm_sequence(p: Polynomial) -> list[Polynomial]:
    seq = [p, derivative(p)]
    while not seq[-1].is_zero and seq[-1].degree > 0:
        r = poly_divmod(seq[-2], seq[-1])[1]
        if r.is_zero:
            break
        # positive rescaling keeps sign variations intact and coefficients small
        seq.append(-r / abs(r.leading))
    return [s for s in seq if not s.is_zero]


def _variations(values) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _sign_at_infinity(seq, positive: bool):
    out = []
    for s in seq:
        lc = s.leading
        if not positive and s.degree % 2 == 1:
            lc = -lc
        out.append(lc)
    return out


def count_real_roots(p: Polynomial, lo=None, hi=None, seq=None) -> int:
    """Number of distinct real roots of ``p`` in ``(lo, hi]`` (None = infinite)."""
    if p.is_zero:
        raise DomainError("zero polynomial")
    if seq is None:
        seq = sturm_sequence(p)
    v_lo = _variations(_sign_at_infinity(seq, False) if lo is None else [evaluate(s, to_fraction(lo)) for s in seq])
    v_hi = _variations(_sign_at_infinity(seq, True) if hi is None else [evaluate(s, to_fraction(hi)) for s in seq])
    return v_lo - v_hi


@lru_cache(maxsize=4096)
def is_real_rooted(p: Polynomial) -> bool:
    """Exact test that every complex root of ``p`` is real."""
    if p.is_zero:
        raise DomainError("real-rootedness of the zero polynomial is undefined")
    if p.degree == 0:
        return True
    sqf = squarefree_part(p)
    return count_real_roots(sqf) == sqf.degree


# ---------------------------------------------------------------------------
# root finding

MAXROOT_MAXITER = 200


def _cauchy_bound(c: np.ndarray) -> float:
    lc = c[-1]
    return 1.0 + float(np.max(np.abs(c[:-1] / lc))) if c.size > 1 else 0.0


def _cauchy_bound_exact(p: Polynomial) -> Fraction:
    lc = abs(p.leading)
    return 1 + max(abs(c) / lc for c in p.coeffs[:-1])


def max_root(p: Polynomial, validate: bool = False) -> float:
    """Largest real root of a real-rooted ``p`` of degree >= 1.

    Newton's method started at the Cauchy bound descends monotonically to the
    largest root. It is run on the square-free part so the target root is
    simple; if it fails to converge in 200 steps, Sturm bisection takes over.
    """
    if p.is_zero or p.degree < 1:
        raise DegreeError("max_root needs a polynomial of degree >= 1")
    if validate and not is_real_rooted(p):
        raise DomainError("max_root called on a polynomial that is not real rooted")
    q = squarefree_part(p)
    if q.degree == 1:
        return float(-q.coeffs[0] / q.coeffs[1])
    c = q.float_coeffs()
    x, _, ok = _kernels.newton_maxroot(c, _cauchy_bound(c), MAXROOT_MAXITER)
    if ok:
        return float(x)
    return _bisect_max_root(q)


def _bisect_max_root(q: Polynomial) -> float:
    seq = sturm_sequence(q)
    hi = _cauchy_bound_exact(q)
    lo = -hi
    if count_real_roots(q, lo, hi, seq) == 0:
        raise DomainError("polynomial has no real root")
    while hi - lo > Fraction(1, 2**60) * max(1, abs(hi)):
        mid = (lo + hi) / 2
        if count_real_roots(q, mid, hi, seq) > 0:
            lo = mid
        else:
            hi = mid
    return float((lo + hi) / 2)


def min_root(p: Polynomial, validate: bool = False) -> float:
    """Smallest real root, as ``-max_root(p(-x))``."""
    return -max_root(compose_linear(p, -1, 0), validate=validate)


class _SignOracle:
    """Exact sign of ``f`` at doubles.

    A float Horner pass with a running rounding-error bound settles most
    points; ambiguous ones are evaluated exactly in integers (``x`` is a dyadic
    rational, ``f`` is scaled to integer coefficients).
    """

    def __init__(self, f: Polynomial):
        den = 1
        for c in f.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        self.ints = [int(c * den) for c in f.coeffs]
        self.fl = [float(c) for c in f.coeffs]
        # float() of a coefficient may be inexact; carry its error into the bound
        self.fl_err = [abs(float(c) - c) for c in f.coeffs]
        self.f = f

    def __call__(self, x: float) -> int:
        acc = 0.0
        bound = 0.0
        coeff_err = 0.0
        ax = abs(x)
        for c, e in zip(reversed(self.fl), reversed(self.fl_err)):
            acc = acc * x + c
            bound = bound * ax + abs(acc)
            coeff_err = coeff_err * ax + float(e)
        # a posteriori Horner bound, padded by a factor of 4
        err = 4.0 * len(self.fl) * 2.220446049250313e-16 * bound + 2.0 * coeff_err
        if acc > err:
            return 1
        if acc < -err:
            return -1
        num, den = float(x).as_integer_ratio()
        n = len(self.ints) - 1
        v = 0
        for k, c in enumerate(self.ints):
            v += c * num**k * den ** (n - k)
        return (v > 0) - (v < 0)


def _exact_sign(p: Polynomial, x: float) -> int:
    return _SignOracle(p)(x)


def _refine_simple_root(f: Polynomial, lo: Fraction, hi: Fraction) -> float:
    # f has exactly one simple root in (lo, hi) and does not vanish at either end
    sign = _SignOracle(f)
    a, b = float(lo), float(hi)
    sa, sb = sign(a), sign(b)
    if sa == 0:
        return a
    if sa == sb:
        # float rounding of the endpoints ate the bracket; fall back to exact bisection
        while hi - lo > Fraction(1, 2**70) * max(1, abs(hi)):
            mid = (lo + hi) / 2
            if count_real_roots(f, mid, hi) > 0:
                lo = mid
            else:
                hi = mid
        return float(hi)
    while True:
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            return b if abs(evaluate(f, Fraction(b))) < abs(evaluate(f, Fraction(a))) else a
        sm = sign(mid)
        if sm == 0:
            return mid
        if sm == sa:
            a = mid
        else:
            b = mid


def _isolate(f: Polynomial) -> list[tuple[Fraction, Fraction]]:
    seq = sturm_sequence(f)
    bound = _cauchy_bound_exact(f)
    stack = [(-bound, bound)]
    out = []
    while stack:
        lo, hi = stack.pop()
        n = count_real_roots(f, lo, hi, seq)
        if n == 0:
            continue
        if n == 1:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        k = 1
        while evaluate(f, mid) == 0:
            mid = lo + (hi - lo) * Fraction(512 + k, 1024)
            k += 1
        stack.append((lo, mid))
        stack.append((mid, hi))
    return out


def all_roots(p: Polynomial, validate: bool = True) -> RootList:
    """All real roots with multiplicity, sorted descending.

    Multiplicities come from a square-free decomposition; each square-free
    factor's roots are isolated with Sturm sequences and refined by bisection
    with exact sign evaluation.
    """
    if p.is_zero:
        raise DomainError("zero polynomial")
    if validate and not is_real_rooted(p):
        raise DomainError("all_roots called on a polynomial that is not real rooted")
    roots = []
    for f, mult in squarefree_decomposition(p):
        for lo, hi in _isolate(f):
            r = _refine_simple_root(f, lo, hi)
            roots.extend([r] * mult)
    return RootList(tuple(roots))


# ---------------------------------------------------------------------------
# JSON text format


def _frac_str(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


def poly_to_json(p: Polynomial) -> dict:
    """``{"coeffs": ["num/den", ...], "degree": n}``, ascending in power."""
    return {"coeffs": [_frac_str(c) for c in p.coeffs] or ["0/1"], "degree": p.degree}


def poly_from_json(obj: dict) -> Polynomial:
    """Parse the polynomial text format (``coeffs`` or ``roots`` form)."""
    if not isinstance(obj, dict):
        raise ValueError("polynomial JSON must be an object")
    if ("coeffs" in obj) == ("roots" in obj):
        raise ValueError('polynomial JSON needs exactly one of "coeffs" or "roots"')
    try:
        if "coeffs" in obj:
            p = Polynomial(to_fraction(c) for c in obj["coeffs"])
        else:
            p = from_roots([to_fraction(r) for r in obj["roots"]])
    except (TypeError, ZeroDivisionError) as exc:
        raise ValueError(f"bad polynomial entry: {exc}") from exc
    if "degree" in obj and int(obj["degree"]) != p.degree:
        raise ValueError(f"declared degree {obj['degree']} but parsed degree {p.degree}")
    return p
