"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

The lines are also collected and echoed in the pytest terminal summary.
Run alone with ``pytest tests/test_acceptance.py -v``.
"""
import time
from fractions import Fraction

import numpy as np
import pytest

from finfree import cli
from finfree.cheby import (
    check_cheby_barrier,
    check_cheby_ratio,
    check_coth_convexity,
    check_p1q1_cauchy,
    cheb_U,
    default_grid,
    rect_cheb,
)
from finfree.convolve import (
    asym_additive,
    asym_additive_laguerre_form,
    sym_additive,
    sym_additive_deriv_form,
    sym_multiplicative,
)
from finfree.pinch import decomposition_error, mult_pinch, pinch, rec_pinch
from finfree.poly import (
    Polynomial,
    all_roots,
    compose_linear,
    from_roots,
    is_real_rooted,
    max_root,
    min_root,
    shift_op,
    square_substitute,
)
from finfree.rmt import (
    RationalMatrix,
    charpoly_exact,
    mc_asym_additive,
    mc_sym_additive,
    mc_sym_multiplicative,
    quad_asym_additive,
    quad_sym_additive,
    z_scores,
)
from finfree.transforms import (
    check_classical_bounds,
    check_derivative_shift,
    check_laguerre_shift,
    check_mult_bound,
    check_polar_derivative,
    check_recsum_bound,
    check_sqsum_bound,
    w_operator,
)

RESULTS: list[str] = []
X = Polynomial.x()


def record(n: int, ok: bool, what: str, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n:2d}: {what} ({detail})"
    RESULTS.append(line)
    print(line)


def int_symmetric(rng, d):
    m = rng.integers(-3, 4, size=(d, d))
    return RationalMatrix.from_rows((np.triu(m) + np.triu(m, 1).T).tolist(), True)


def int_square(rng, d):
    return RationalMatrix.from_rows(rng.integers(-3, 4, size=(d, d)).tolist())


def random_rational_poly(rng, d):
    num = rng.integers(-9, 10, size=d + 1)
    den = rng.integers(1, 5, size=d + 1)
    c = [Fraction(int(a), int(b)) for a, b in zip(num, den)]
    if c[-1] == 0:
        c[-1] = Fraction(1)
    return Polynomial(c)


def random_roots(rng, d, lo, hi, den=1):
    return [Fraction(int(v), den) for v in rng.integers(lo * den, hi * den + 1, size=d)]


# ---------------------------------------------------------------------------


def test_criterion_01_symmetric_quadrature():
    rng = np.random.default_rng(101)
    t0 = time.perf_counter()
    mismatches, total = 0, 0
    for d in (2, 3, 4, 5):
        for _ in range(50):
            a, b = int_symmetric(rng, d), int_symmetric(rng, d)
            total += 1
            if quad_sym_additive(a, b) != sym_additive(charpoly_exact(a), charpoly_exact(b), d):
                mismatches += 1
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and elapsed <= 120
    record(1, ok, "signed-permutation quadrature == symmetric additive formula, exact",
           f"{total} pairs, {mismatches} mismatches, {elapsed:.1f}s")
    assert ok


def test_criterion_02_asymmetric_quadrature():
    rng = np.random.default_rng(102)
    t0 = time.perf_counter()
    mismatches, total = 0, 0
    for d in (2, 3):
        for _ in range(30):
            a, b = int_square(rng, d), int_square(rng, d)
            total += 1
            formula = asym_additive(charpoly_exact(a.gram()), charpoly_exact(b.gram()), d)
            if quad_asym_additive(a, b) != formula:
                mismatches += 1
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and elapsed <= 120
    record(2, ok, "pair quadrature == asymmetric additive formula, exact",
           f"{total} pairs, {mismatches} mismatches, {elapsed:.1f}s")
    assert ok


def test_criterion_03_dual_forms():
    rng = np.random.default_rng(103)
    bad_sym = bad_asym = 0
    for _ in range(500):
        d = int(rng.integers(1, 9))
        p, q = random_rational_poly(rng, d), random_rational_poly(rng, d)
        bad_sym += sym_additive(p, q, d) != sym_additive_deriv_form(p, q, d)
    for _ in range(500):
        d = int(rng.integers(1, 9))
        p, q = random_rational_poly(rng, d), random_rational_poly(rng, d)
        bad_asym += asym_additive(p, q, d) != asym_additive_laguerre_form(p, q, d)
    ok = bad_sym == 0 and bad_asym == 0
    record(3, ok, "weight form == derivative form / Laguerre form, exact",
           f"500+500 pairs, degrees 1..8, {bad_sym}+{bad_asym} mismatches")
    assert ok


def test_criterion_04_monte_carlo():
    rng = np.random.default_rng(104)
    t0 = time.perf_counter()
    zs = []
    for d in (2, 3, 4):
        a, b = int_symmetric(rng, d), int_symmetric(rng, d)
        exact = sym_additive(charpoly_exact(a), charpoly_exact(b), d)
        zs.append(z_scores(mc_sym_additive(a, b, 100_000, 1000 + d), exact))

        x, y = rng.integers(0, 3, size=(d, d)), rng.integers(0, 3, size=(d, d))
        a = RationalMatrix.from_rows((x @ x.T).tolist())
        b = RationalMatrix.from_rows((y @ y.T).tolist())
        exact = sym_multiplicative(charpoly_exact(a), charpoly_exact(b), d)
        zs.append(z_scores(mc_sym_multiplicative(a, b, 100_000, 2000 + d), exact))

        a, b = int_square(rng, d), int_square(rng, d)
        exact = asym_additive(charpoly_exact(a.gram()), charpoly_exact(b.gram()), d)
        zs.append(z_scores(mc_asym_additive(a, b, 100_000, 3000 + d), exact))
    z = np.abs(np.concatenate(zs))
    elapsed = time.perf_counter() - t0
    over3 = int(np.sum(z > 3))
    ok = bool(np.all(z < 4)) and over3 <= 1 and elapsed <= 300
    record(4, ok, "Monte Carlo within 4 SE of exact, <= 1 beyond 3 SE",
           f"{z.size} coefficients, max |z| {z.max():.2f}, {over3} beyond 3 SE, {elapsed:.1f}s")
    assert ok


def test_criterion_05_real_rootedness_closure():
    rng = np.random.default_rng(105)
    failures = {"sym-add": 0, "sym-mult": 0, "asym-add": 0}
    for _ in range(1000):
        d = int(rng.integers(1, 7))
        p = from_roots(random_roots(rng, d, -10, 10, 2))
        q = from_roots(random_roots(rng, d, -10, 10, 2))
        failures["sym-add"] += not is_real_rooted(sym_additive(p, q))
    for name, fn in (("sym-mult", sym_multiplicative), ("asym-add", asym_additive)):
        for _ in range(1000):
            d = int(rng.integers(1, 7))
            p = from_roots(random_roots(rng, d, 0, 10, 2))
            q = from_roots(random_roots(rng, d, 0, 10, 2))
            r = fn(p, q)
            if r.is_zero or not is_real_rooted(r) or min_root(r) < -1e-9:
                failures[name] += 1
    ok = not any(failures.values())
    record(5, ok, "convolutions of admissible pairs are real rooted (and nonnegative)",
           f"1000 pairs each, failures {failures}")
    assert ok


def test_criterion_06_transform_bounds():
    rng = np.random.default_rng(106)
    grid = [Fraction(1, 4), Fraction(1), Fraction(4)]
    viol = {k: 0 for k in ("sqsum", "recsum", "mult", "walsh", "szego")}
    for i in range(500):
        d = int(rng.integers(1, 9))
        g = grid[i % 3]
        p, q = from_roots(random_roots(rng, d, -10, 10)), from_roots(random_roots(rng, d, -10, 10))
        viol["sqsum"] += not check_sqsum_bound(p, q, g).satisfied
        viol["walsh"] += not check_classical_bounds(p, q, "sym-add").satisfied
        p, q = from_roots(random_roots(rng, d, 0, 10)), from_roots(random_roots(rng, d, 0, 10))
        viol["recsum"] += not check_recsum_bound(p, q, g).satisfied
        # the multiplicative transform is infinite for c x^d; redraw those
        p, q = from_roots(random_roots(rng, d, 0, 10)), from_roots(random_roots(rng, d, 0, 10))
        while all(c == 0 for c in p.coeffs[:-1]):
            p = from_roots(random_roots(rng, d, 0, 10))
        while all(c == 0 for c in q.coeffs[:-1]):
            q = from_roots(random_roots(rng, d, 0, 10))
        viol["mult"] += not check_mult_bound(p, q, g).satisfied
        viol["szego"] += not check_classical_bounds(p, q, "sym-mult").satisfied

    worst_eq = 0.0
    for d in range(1, 9):
        for lam in (0, 1, 3, 7):
            pt = from_roots([lam] * d)
            q_any = from_roots(random_roots(rng, d, -10, 10))
            q_pos = from_roots(random_roots(rng, d, 1, 10))
            for g in grid:
                worst_eq = max(worst_eq, abs(check_sqsum_bound(pt, q_any, g).margin))
                worst_eq = max(worst_eq, abs(check_recsum_bound(q_pos, X**d, g).margin))
                if lam:
                    worst_eq = max(worst_eq, abs(check_mult_bound(pt, q_pos, g).margin))
            worst_eq = max(worst_eq, abs(check_classical_bounds(pt, q_any, "sym-add").margin))
            if lam:
                worst_eq = max(worst_eq, abs(check_classical_bounds(pt, q_pos, "sym-mult").margin))
    ok = not any(viol.values()) and worst_eq <= 1e-8
    record(6, ok, "transform bounds hold; equality cases tight",
           f"500 instances per theorem, violations {viol}, worst equality |margin| {worst_eq:.1e}")
    assert ok


def test_criterion_07_chebyshev():
    bad_closed = 0
    for d in range(1, 13):
        for lam in (1, 2, Fraction(5, 2)):
            for mu in (1, 2, Fraction(5, 2)):
                bad_closed += rect_cheb(d, lam, mu) != asym_additive(from_roots([lam] * d), from_roots([mu] * d))
    bad_u = sum(rect_cheb(d, 1, 1) != compose_linear(cheb_U(d), Fraction(1, 2), -1) for d in range(17))
    reports = []
    for d in range(1, 11):
        reports += check_cheby_barrier(d, default_grid("barrier"))
        reports += check_cheby_ratio(d, default_grid("ratio"))
        for lam, mu in ((1, 1), (1, 4), (2, 3), (Fraction(5, 2), 1)):
            reports += check_p1q1_cauchy(d, lam, mu, default_grid("p1q1", lam, mu))
    for alpha in (0.01, 0.1, 0.5, 1.0, 2.0, 4.0, 10.0):
        reports += check_coth_convexity(alpha, default_grid("coth"))
    bad_grid = sum(not r.satisfied for r in reports)
    ok = bad_closed == 0 and bad_u == 0 and bad_grid == 0
    record(7, ok, "Chebyshev closed forms exact; barrier/ratio/coth/p1q1 grids satisfied",
           f"{bad_closed}+{bad_u} closed-form mismatches, {bad_grid}/{len(reports)} grid violations")
    assert ok


def _pinch_checks(p, res, barrier, target, lam_order=True):
    errs = [decomposition_error(p, res)]
    errs += [abs(barrier(q) - target) for q in (res.p_til, res.p_hat)]
    gap = 1e-12 * (res.lam1 - res.lamk)
    order = res.lam1 - gap > res.mu > res.lamk + gap and res.rho > res.lam1 + gap
    return max(errs), order


def test_criterion_08_pinching():
    rng = np.random.default_rng(108)
    worst, order_fail = 0.0, 0
    for _ in range(300):
        d = int(rng.integers(2, 8))
        roots = random_roots(rng, d, -10, 10, 2)
        while len(set(roots)) < 2:
            roots = random_roots(rng, d, -10, 10, 2)
        p = from_roots(roots)
        rl = list(all_roots(p))
        k = int(rng.choice([i + 1 for i, x in enumerate(rl) if x < rl[0]]))
        alpha = Fraction(int(rng.integers(1, 41)), 10)
        res = pinch(p, alpha, k)
        err, order = _pinch_checks(p, res, lambda q: max_root(shift_op(q, alpha)), res.t)
        worst, order_fail = max(worst, err), order_fail + (not order)

        roots = random_roots(rng, d, 0, 10, 2)
        while len(set(roots)) < 2:
            roots = random_roots(rng, d, 0, 10, 2)
        p = from_roots(roots)
        w = Fraction(int(rng.integers(1, 41)), 10)
        res = mult_pinch(p, w)
        target = max_root(w_operator(p, w, d))
        err, order = _pinch_checks(p, res, lambda q: max_root(w_operator(q, w, d)), target)
        worst, order_fail = max(worst, err), order_fail + (not order)

        res = rec_pinch(p, alpha)
        target = max_root(shift_op(square_substitute(p), alpha))
        err, order = _pinch_checks(p, res, lambda q: max_root(shift_op(square_substitute(q), alpha)), target)
        worst, order_fail = max(worst, err), order_fail + (not order)
    ok = worst <= 1e-9 and order_fail == 0
    record(8, ok, "pinch and both corollaries: decomposition, barrier roots, orderings",
           f"300 instances x 3 constructions, worst error {worst:.1e}, {order_fail} ordering failures")
    assert ok


def test_criterion_09_auxiliary_lemmas():
    rng = np.random.default_rng(109)
    viol = {"derivP": 0, "polarDeriv": 0, "p1q0": 0}
    for _ in range(200):
        d = int(rng.integers(2, 9))
        p = from_roots(random_roots(rng, d, -10, 10))
        for a in (Fraction(1, 4), 1, 3):
            viol["derivP"] += not check_derivative_shift(p, a).satisfied
        p = from_roots([Fraction(int(v), 10) for v in rng.integers(1, 101, size=d)])
        viol["polarDeriv"] += not check_polar_derivative(p).satisfied
        p = from_roots(random_roots(rng, d, 0, 10))
        for a in (Fraction(1, 2), 1, 2):
            viol["p1q0"] += not check_laguerre_shift(p, a).satisfied
    worst_eq = 0.0
    for d in range(2, 9):
        for lam in (1, 2, 5):
            worst_eq = max(worst_eq, abs(check_derivative_shift(from_roots([lam] * d), 1).margin))
            worst_eq = max(worst_eq, abs(check_polar_derivative(from_roots([lam] * d)).margin))
        for a in (Fraction(1, 2), 1, 2):
            worst_eq = max(worst_eq, abs(check_laguerre_shift(X**d, a).margin))
    ok = not any(viol.values()) and worst_eq <= 1e-8
    record(9, ok, "auxiliary lemma inequalities hold; equality cases tight",
           f"200 instances each, violations {viol}, worst equality |margin| {worst_eq:.1e}")
    assert ok


def test_criterion_10_determinism(tmp_path):
    outputs = []
    for run in range(2):
        q = tmp_path / f"quad{run}.json"
        m = tmp_path / f"mc{run}.json"
        rq = cli.main(["verify", "quadrature", "--d", "2..4", "--instances", "5", "--seed", "7", "--out", str(q)])
        rm = cli.main(["verify", "montecarlo", "--op", "asym-add", "--d", "2,3", "--n", "20000", "--seed", "7",
                       "--out", str(m)])
        outputs.append((rq, rm, q.read_bytes(), m.read_bytes()))
    ok = outputs[0] == outputs[1] and outputs[0][:2] == (0, 0)
    record(10, ok, "verify twice with identical flags gives byte-identical reports",
           f"quadrature {len(outputs[0][2])} bytes, montecarlo {len(outputs[0][3])} bytes")
    assert ok


@pytest.fixture(scope="module", autouse=True)
def _echo_results():
    yield
    # also shown by the terminal-summary hook in conftest.py
    for line in RESULTS:
        print(line)
