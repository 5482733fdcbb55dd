"""Command-line front end.

Exit codes: 0 success, 2 unparseable input, 3 domain or budget error,
4 an inequality was violated or a verification mismatched.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction

import numpy as np

from finfree import cheby, pinch, rmt, transforms
from finfree.convolve import ConvolutionKind, _validate, asym_additive, convolve, sym_additive, sym_multiplicative
from finfree.errors import BudgetError, FinFreeError
from finfree.poly import poly_from_json, poly_to_json, to_fraction

EXIT_OK, EXIT_PARSE, EXIT_DOMAIN, EXIT_VIOLATION = 0, 2, 3, 4

DEFAULT_ALPHA_GRID = "1/4,1,4"
DEFAULT_W_GRID = "1/4,1,4"
CSV_FIELDS = ("context", "param1", "param2", "lhs", "rhs", "margin", "satisfied")


class InputError(Exception):
    """Bad flags or unreadable input files (exit 2)."""


# ---------------------------------------------------------------------------
# output


def fmt_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x} in output")
    return f"{x:.17g}"


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with sorted keys and doubles at 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(obj[k], indent, _level + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt_float(obj)
    if obj is None:
        return "null"
    return json.dumps(str(obj))


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt_float(v)
    return str(v)


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in reports:
        w.writerow([_csv_cell(getattr(r, f)) for f in CSV_FIELDS])
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report_payload(reports, extra: dict | None = None) -> dict:
    rows = []
    for r in reports:
        row = r.to_json()
        row["param1"] = r.param1
        row["param2"] = r.param2
        rows.append(row)
    payload = {"reports": rows, "all_satisfied": all(r.satisfied for r in reports)}
    if extra:
        payload.update(extra)
    return payload


def _emit_reports(reports, args, extra: dict | None = None) -> int:
    if args.format == "csv":
        _emit(reports_to_csv(reports), args.out)
    else:
        _emit(dumps(_report_payload(reports, extra)) + "\n", args.out)
    return EXIT_OK if all(r.satisfied for r in reports) else EXIT_VIOLATION


# ---------------------------------------------------------------------------
# input parsing


def _read_poly(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
        p = poly_from_json(obj)
    except (OSError, ValueError, TypeError, ZeroDivisionError) as exc:
        raise InputError(f"cannot read polynomial from {path}: {exc}") from exc
    return p


def parse_grid(text: str) -> list[Fraction]:
    """Comma-separated rationals or decimals, e.g. ``1/4,1,4``."""
    try:
        vals = [to_fraction(v.strip()) for v in text.split(",") if v.strip()]
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise InputError(f"bad grid {text!r}: {exc}") from exc
    if not vals:
        raise InputError("grid must be non-empty")
    return vals


def parse_dims(text: str) -> list[int]:
    """``3``, ``2..5`` or ``2,4``."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            dims = list(range(int(lo), int(hi) + 1))
        else:
            dims = [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise InputError(f"bad dimension spec {text!r}") from exc
    if not dims:
        raise InputError("empty dimension range")
    return dims


def _single_d(args) -> int | None:
    if args.d is None:
        return None
    dims = parse_dims(args.d)
    if len(dims) != 1:
        raise InputError("--d must be a single integer here")
    return dims[0]


# ---------------------------------------------------------------------------
# commands


def cmd_conv(args) -> int:
    p, q = _read_poly(args.p), _read_poly(args.q)
    r = convolve(args.kind, p, q, _single_d(args), validate=args.validate)
    _emit(dumps(poly_to_json(r)) + "\n", args.out)
    return EXIT_OK


_TRANSFORMS = {
    "cauchy": transforms.cauchy_transform,
    "invcauchy": transforms.inverse_cauchy,
    "rtrans": transforms.r_transform,
    "mtrans": transforms.m_transform,
    "strans": transforms.s_transform_variant,
}


def cmd_transform(args) -> int:
    p = _read_poly(args.p)
    fn = _TRANSFORMS[args.name]
    rows = [{"point": float(x), "value": fn(p, x)} for x in parse_grid(args.points)]
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("transform", "point", "value"))
        for r in rows:
            w.writerow((args.name, fmt_float(r["point"]), fmt_float(r["value"])))
        _emit(buf.getvalue(), args.out)
    else:
        _emit(dumps({"transform": args.name, "values": rows}) + "\n", args.out)
    return EXIT_OK


def cmd_bounds(args) -> int:
    p, q = _read_poly(args.p), _read_poly(args.q)
    d = _single_d(args)
    if args.validate:
        _validate(p, q, nonnegative=args.theorem in ("recsum", "mult", "szego"))
    th = args.theorem
    if th == "sqsum":
        reports = [transforms.check_sqsum_bound(p, q, a, d) for a in parse_grid(args.alpha_grid)]
    elif th == "recsum":
        reports = [transforms.check_recsum_bound(p, q, a, d) for a in parse_grid(args.alpha_grid)]
    elif th == "mult":
        reports = [transforms.check_mult_bound(p, q, w, d) for w in parse_grid(args.w_grid)]
    elif th == "walsh":
        reports = [transforms.check_classical_bounds(p, q, "sym-add", d)]
    else:
        reports = [transforms.check_classical_bounds(p, q, "sym-mult", d)]
    return _emit_reports(reports, args)


def cmd_pinch(args) -> int:
    p = _read_poly(args.p)
    d = _single_d(args)
    if args.mode == "plain":
        res = pinch.pinch(p, to_fraction(args.alpha), args.k)
    elif args.mode == "mult":
        res = pinch.mult_pinch(p, to_fraction(args.w), d, args.k)
    else:
        res = pinch.rec_pinch(p, to_fraction(args.alpha), d, args.k)
    payload = {
        "mode": args.mode,
        "k": res.k,
        "alpha": res.alpha,
        "t": res.t,
        "mu": res.mu,
        "rho": res.rho,
        "lam1": res.lam1,
        "lamk": res.lamk,
        "p_til": [float(c) for c in res.p_til.coeffs],
        "p_hat": [float(c) for c in res.p_hat.coeffs],
        "decomposition_error": pinch.decomposition_error(p, res),
    }
    _emit(dumps(payload) + "\n", args.out)
    return EXIT_OK


def cmd_cheby(args) -> int:
    check = args.check
    dims = parse_dims(args.d) if args.d else list(range(1, 11))
    custom = parse_grid(args.grid) if args.grid else None

    def grid(*extra):
        return [float(v) for v in custom] if custom else cheby.default_grid(check, *extra)

    reports = []
    if check == "barrier":
        for d in dims:
            reports += cheby.check_cheby_barrier(d, grid())
    elif check == "ratio":
        for d in dims:
            reports += cheby.check_cheby_ratio(d, grid())
    elif check == "coth":
        alphas = parse_grid(args.alpha) if args.alpha else [Fraction(1)]
        for a in alphas:
            reports += cheby.check_coth_convexity(float(a), grid())
    else:
        lam, mu = to_fraction(args.lam), to_fraction(args.mu)
        for d in dims:
            reports += cheby.check_p1q1_cauchy(d, lam, mu, grid(lam, mu))
    return _emit_reports(reports, args)


def _random_symmetric(rng, d: int) -> list[list[int]]:
    m = rng.integers(-3, 4, size=(d, d))
    m = np.triu(m) + np.triu(m, 1).T
    return m.tolist()


def _instance_seed(seed: int, d: int, i: int) -> int:
    return int(np.random.SeedSequence([seed, d, i]).generate_state(1, np.uint64)[0])


def _verify_quadrature(args, dims) -> tuple[dict, bool]:
    kind = ConvolutionKind.parse(args.op or "sym-add")
    limit = {ConvolutionKind.SYM_ADDITIVE: rmt.SYM_QUAD_MAX_D, ConvolutionKind.ASYM_ADDITIVE: rmt.ASYM_QUAD_MAX_D}
    if kind not in limit:
        raise InputError("quadrature supports --op sym-add or asym-add")
    too_big = [d for d in dims if d > limit[kind]]
    if too_big:
        raise BudgetError(f"d={too_big[0]} exceeds the enumeration budget d <= {limit[kind]}")
    rng = rmt.make_rng(args.seed)
    rows, ok = [], True
    for d in dims:
        for i in range(args.instances):
            if kind is ConvolutionKind.SYM_ADDITIVE:
                a = rmt.RationalMatrix.from_rows(_random_symmetric(rng, d), True)
                b = rmt.RationalMatrix.from_rows(_random_symmetric(rng, d), True)
                quad = rmt.quad_sym_additive(a, b)
                formula = sym_additive(rmt.charpoly_exact(a), rmt.charpoly_exact(b), d)
            else:
                a = rmt.RationalMatrix.from_rows(rng.integers(-3, 4, size=(d, d)).tolist())
                b = rmt.RationalMatrix.from_rows(rng.integers(-3, 4, size=(d, d)).tolist())
                quad = rmt.quad_asym_additive(a, b)
                formula = asym_additive(rmt.charpoly_exact(a.gram()), rmt.charpoly_exact(b.gram()), d)
            match = quad == formula
            ok &= match
            rows.append({
                "d": d, "index": i, "A": a.to_json(), "B": b.to_json(),
                "quadrature": poly_to_json(quad), "formula": poly_to_json(formula), "match": match,
            })
    return {"mode": "quadrature", "op": kind.value, "seed": args.seed, "instances": rows, "all_match": ok}, ok


def _verify_montecarlo(args, dims) -> tuple[dict, bool]:
    kind = ConvolutionKind.parse(args.op or "sym-add")
    rng = rmt.make_rng(args.seed)
    rows, ok = [], True
    for d in dims:
        for i in range(args.instances):
            if kind is ConvolutionKind.SYM_ADDITIVE:
                a, b = _random_symmetric(rng, d), _random_symmetric(rng, d)
                ra, rb = rmt.RationalMatrix.from_rows(a), rmt.RationalMatrix.from_rows(b)
                exact = sym_additive(rmt.charpoly_exact(ra), rmt.charpoly_exact(rb), d)
                est_fn = rmt.mc_sym_additive
            elif kind is ConvolutionKind.SYM_MULTIPLICATIVE:
                x, y = rng.integers(0, 3, size=(d, d)), rng.integers(0, 3, size=(d, d))
                a, b = (x @ x.T).tolist(), (y @ y.T).tolist()
                ra, rb = rmt.RationalMatrix.from_rows(a), rmt.RationalMatrix.from_rows(b)
                exact = sym_multiplicative(rmt.charpoly_exact(ra), rmt.charpoly_exact(rb), d)
                est_fn = rmt.mc_sym_multiplicative
            else:
                a, b = rng.integers(-3, 4, size=(d, d)).tolist(), rng.integers(-3, 4, size=(d, d)).tolist()
                ra, rb = rmt.RationalMatrix.from_rows(a), rmt.RationalMatrix.from_rows(b)
                exact = asym_additive(rmt.charpoly_exact(ra.gram()), rmt.charpoly_exact(rb.gram()), d)
                est_fn = rmt.mc_asym_additive
            seed = _instance_seed(args.seed, d, i)
            est = est_fn(np.array(a, dtype=float), np.array(b, dtype=float), args.n, seed)
            z = rmt.z_scores(est, exact)
            within = bool(np.all(np.abs(z) < 4.0))
            ok &= within
            rows.append({
                "d": d, "index": i, "A": ra.to_json(), "B": rb.to_json(), "estimate": est.to_json(),
                "exact": poly_to_json(exact), "z": [float(v) for v in z], "within_4se": within,
            })
    return {"mode": "montecarlo", "op": kind.value, "seed": args.seed, "n": args.n, "instances": rows,
            "all_within_4se": ok}, ok


def cmd_verify(args) -> int:
    dims = parse_dims(args.d) if args.d else [2, 3]
    if args.mode == "quadrature":
        report, ok = _verify_quadrature(args, dims)
    else:
        report, ok = _verify_montecarlo(args, dims)
    _emit(dumps(report) + "\n", args.out)
    return EXIT_OK if ok else EXIT_VIOLATION


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="finfree", description="Finite free convolutions and their root bounds.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, fmt=False, d=True):
        sp.add_argument("--out", help="output file (default: stdout)")
        if d:
            sp.add_argument("--d", help="degree, or a range like 2..5 where accepted")
        if fmt:
            sp.add_argument("--format", choices=("json", "csv"), default="csv")

    sp = sub.add_parser("conv", help="convolve two polynomial files")
    sp.add_argument("kind", choices=[k.value for k in ConvolutionKind])
    sp.add_argument("p")
    sp.add_argument("q")
    sp.add_argument("--validate", action="store_true", help="check real-rootedness (and sign) of inputs")
    common(sp)
    sp.set_defaults(func=cmd_conv)

    sp = sub.add_parser("transform", help="evaluate a transform at given points")
    sp.add_argument("name", choices=sorted(_TRANSFORMS))
    sp.add_argument("p")
    sp.add_argument("--points", "--w-grid", dest="points", required=True, help="comma-separated points")
    sp.add_argument("--out")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.set_defaults(func=cmd_transform)

    sp = sub.add_parser("bounds", help="check a transform bound on a grid")
    sp.add_argument("theorem", choices=("sqsum", "recsum", "mult", "walsh", "szego"))
    sp.add_argument("p")
    sp.add_argument("q")
    sp.add_argument("--alpha-grid", default=DEFAULT_ALPHA_GRID)
    sp.add_argument("--w-grid", default=DEFAULT_W_GRID)
    sp.add_argument("--validate", action="store_true")
    common(sp, fmt=True)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("pinch", help="pinch two roots of a polynomial")
    sp.add_argument("p")
    sp.add_argument("--mode", choices=("plain", "mult", "rec"), default="plain")
    sp.add_argument("--alpha", default="1")
    sp.add_argument("--w", default="1")
    sp.add_argument("--k", type=int, default=None, help="1-based index of the root pinched with the largest")
    common(sp)
    sp.set_defaults(func=cmd_pinch)

    sp = sub.add_parser("cheby", help="grid-check the Chebyshev inequalities")
    sp.add_argument("check", choices=("barrier", "ratio", "coth", "p1q1"))
    sp.add_argument("--lambda", dest="lam", default="1")
    sp.add_argument("--mu", default="1")
    sp.add_argument("--alpha", help="comma-separated alphas for coth (default 1)")
    sp.add_argument("--grid", help="override the default log-spaced grid")
    common(sp, fmt=True)
    sp.set_defaults(func=cmd_cheby)

    sp = sub.add_parser("verify", help="quadrature or Monte Carlo verification campaign")
    sp.add_argument("mode", choices=("quadrature", "montecarlo"))
    sp.add_argument("--op", help="sym-add, sym-mult or asym-add (default sym-add)")
    sp.add_argument("--instances", type=int, default=1)
    sp.add_argument("--n", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)
    common(sp)
    sp.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (FinFreeError, ValueError) as exc:
        # FinFreeError covers domain, degree and budget errors
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
