import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import pairs, rooted
from finfree.errors import DegreeError, DomainError, PoleError
from finfree.convolve import asym_additive
from finfree.poly import Polynomial, from_roots, max_root, shift_op
from finfree.poly import square_substitute as S
from finfree.transforms import (
    BoundReport,
    cauchy_transform,
    check_classical_bounds,
    check_derivative_shift,
    check_laguerre_shift,
    check_mult_bound,
    check_polar_derivative,
    check_recsum_bound,
    check_sqsum_bound,
    inverse_cauchy,
    inverse_m,
    m_transform,
    r_transform,
    s_transform_variant,
    w_operator,
)

X = Polynomial.x()
int_roots = st.integers(-10, 10)
nat_roots = st.integers(0, 10)
GRID = [Fraction(1, 4), Fraction(1), Fraction(4)]

# frozen from an independent sympy computation (nroots at 30 digits)
GOLDEN_RECSUM = (4.46086732478310058746761454431, 4.47213595499957939281834733746)
GOLDEN_INVERSE_M = 6.21221445044902618043655285373  # (15 + sqrt(97)) / 4
GOLDEN_MULT_12 = (2.60818249141601470991096091190, 2.69087345720496702963727152199)
GOLDEN_SZEGO_12 = 3.28077640640441513745535246399


def test_cauchy_examples():
    assert cauchy_transform(from_roots([1, -1]), 2) == pytest.approx(2 / 3)
    with pytest.raises(PoleError):
        cauchy_transform(from_roots([1, -1]), 1)
    assert inverse_cauchy(X**2 - 1, 1) == pytest.approx((1 + math.sqrt(5)) / 2, abs=1e-14)
    with pytest.raises(DomainError):
        inverse_cauchy(X**2 - 1, 0)


def test_r_transform_point_mass_at_zero_vanishes():
    for w in (0.1, 1, 5):
        assert r_transform(X**3, w) == pytest.approx(0.0, abs=1e-12)
    # (x - lam)^d has R = lam
    assert r_transform(from_roots([2] * 3), 0.7) == pytest.approx(2.0, abs=1e-12)


def test_m_and_s_transforms():
    p = X**2 - 3 * X + 2
    assert inverse_m(p, Fraction(1, 3)) == pytest.approx(GOLDEN_INVERSE_M, abs=1e-12)
    assert s_transform_variant(p, Fraction(1, 3)) == pytest.approx(GOLDEN_INVERSE_M / 4, abs=1e-12)
    for w in (1, 7):
        assert s_transform_variant(from_roots([2] * 3), w) == pytest.approx(2.0, abs=1e-12)
    with pytest.raises(DomainError):
        inverse_m(X**3, 1)
    with pytest.raises(DomainError):
        w_operator(p, -1)
    with pytest.raises(DegreeError):
        cauchy_transform(Polynomial([3]), 1)


@given(rooted(int_roots, 1, 6), st.sampled_from(list(np.logspace(-2, 2, 9))))
def test_inverse_cauchy_round_trip(p, w):
    x = inverse_cauchy(p, w)
    assert x > max_root(p)
    assert cauchy_transform(p, x) == pytest.approx(w, rel=1e-8)


@given(rooted(nat_roots, 1, 6), st.sampled_from(list(np.logspace(-2, 2, 9))))
def test_inverse_m_round_trip(p, w):
    assume(any(c != 0 for c in p.coeffs[:-1]))
    z = inverse_m(p, w)
    assert m_transform(p, z) == pytest.approx(w, rel=1e-8)


@given(rooted(nat_roots, 1, 6), st.sampled_from([0.25, 1.0, 4.0]))
def test_w_u_consistency(p, w):
    assume(any(c != 0 for c in p.coeffs[:-1]))
    d = p.degree
    t = max_root(w_operator(p, w, d))
    assert max_root(shift_op(p, Fraction(t) / (d * (Fraction(w) + 1)))) == pytest.approx(t, abs=1e-9)


def test_inverse_cauchy_decreasing():
    p = from_roots([0, 1, 5])
    vals = [inverse_cauchy(p, w) for w in np.logspace(-2, 2, 30)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_sqsum_examples():
    r = check_sqsum_bound(X**2 - 1, X**2 - 1, 1, 2)
    assert r.lhs == pytest.approx(1 + math.sqrt(3) + 2, abs=1e-12)
    assert r.rhs == pytest.approx(2 * (1 + math.sqrt(2)), abs=1e-12)
    assert r.satisfied and r.margin > 0
    for a in GRID:
        assert abs(check_sqsum_bound(from_roots([5, 5]), X**2 - 3 * X, a).margin) <= 1e-9
    assert abs(check_sqsum_bound(X - 3, X - 5, 2, 1).margin) <= 1e-9


def test_recsum_examples():
    r = check_recsum_bound(from_roots([1, 1]), from_roots([1, 1]), 1, 2)
    assert (r.lhs, r.rhs) == pytest.approx(GOLDEN_RECSUM, abs=1e-12)
    assert r.margin > 0
    for a in GRID:
        assert abs(check_recsum_bound(from_roots([1, 2, 7]), X**3, a).margin) <= 1e-9
    assert check_recsum_bound(X - 3, X - 5, 1, 1).satisfied


def test_mult_examples():
    assert abs(check_mult_bound(from_roots([2, 2]), from_roots([1, 3]), 1, 2).margin) <= 1e-9
    r = check_mult_bound(from_roots([1, 2]), from_roots([1, 2]), 1, 2)
    assert (r.lhs, r.rhs) == pytest.approx(GOLDEN_MULT_12, abs=1e-12)
    assert r.satisfied
    assert abs(check_mult_bound(from_roots([1, 4]), from_roots([1, 1]), 3, 2).margin) <= 1e-9
    with pytest.raises(DomainError):
        check_mult_bound(X**2, from_roots([1, 2]), 1)


def test_classical_examples():
    r = check_classical_bounds(X**2 - 1, X**2 - 1, "sym-add")
    assert r.lhs == pytest.approx(math.sqrt(2)) and r.rhs == 2
    r = check_classical_bounds(from_roots([1, 2]), from_roots([1, 2]), "sym-mult")
    assert r.lhs == pytest.approx(GOLDEN_SZEGO_12, abs=1e-12) and r.rhs == 4
    r = check_classical_bounds(X - 3, X - 5, "sym-add", 1)
    assert r.lhs == r.rhs == 8
    with pytest.raises(ValueError):
        check_classical_bounds(X - 3, X - 5, "asym-add")


def test_report_json():
    r = BoundReport.compare("x", 1.0, 2.0, 1e-9, 3, 0.5)
    assert r.to_json() == {"context": "x", "lhs": 1.0, "rhs": 2.0, "margin": 1.0, "satisfied": True,
                           "tolerance": 1e-9}
    assert not BoundReport.compare("x", 2.0, 1.0).satisfied


@given(pairs(int_roots, 1, 6), st.sampled_from(GRID))
def test_sqsum_property(pq, a):
    p, q = pq
    assert check_sqsum_bound(p, q, a).satisfied
    assert check_classical_bounds(p, q, "sym-add").satisfied


@given(pairs(nat_roots, 1, 5), st.sampled_from(GRID))
def test_recsum_property(pq, a):
    p, q = pq
    assert check_recsum_bound(p, q, a).satisfied
    # same statement through the R-transform at w = 1/(2 a d)
    w = 1 / (2 * float(a) * p.degree)
    lhs = r_transform(S(asym_additive(p, q)), w)
    assert lhs <= r_transform(S(p), w) + r_transform(S(q), w) + 1e-9


@given(pairs(nat_roots, 1, 5), st.sampled_from(GRID))
def test_mult_property(pq, w):
    p, q = pq
    assume(any(c != 0 for c in p.coeffs[:-1]) and any(c != 0 for c in q.coeffs[:-1]))
    assert check_mult_bound(p, q, w).satisfied
    assert check_classical_bounds(p, q, "sym-mult").satisfied


@given(rooted(int_roots, 2, 8), st.sampled_from([Fraction(1, 4), 1, 3]))
def test_derivative_shift(p, a):
    assert check_derivative_shift(p, a).satisfied


@given(rooted(st.integers(1, 10), 2, 8))
def test_polar_derivative(p):
    assert check_polar_derivative(p).satisfied


@given(rooted(nat_roots, 2, 8), st.sampled_from([Fraction(1, 2), 1, 2]))
def test_laguerre_shift(p, a):
    assert check_laguerre_shift(p, a).satisfied


@pytest.mark.parametrize("d", [2, 3, 5, 8])
def test_auxiliary_equality_cases(d):
    assert abs(check_derivative_shift(from_roots([3] * d), 2).margin) <= 1e-8
    assert abs(check_polar_derivative(from_roots([2] * d)).margin) <= 1e-8
    assert abs(check_laguerre_shift(X**d, Fraction(1, 2)).margin) <= 1e-8
