"""Command-line interface.

Subcommands

    compute          radii of one or more matrices under the given norms
    bounds           full bound-catalog table for a matrix (or a pair)
    fuzz             deterministic randomized verification of the catalog
    paper-examples   self-contained reproduction of the worked examples
    counterexample   exhibit a violation of the refuted upper bound

Exit codes: 0 success, 1 bound violation (or no counterexample found),
2 usage/parse error, 3 numerical failure, 4 fuzz abort.  Violations of
B_REFUTED_UP never affect exit codes; they are the expected outcome.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .bounds import (
    CATALOG,
    compute_md,
    evaluate_bound,
    evaluate_matrix,
    refuted_upper_value,
    report_to_dict,
)
from .harness import CLASSES, FuzzAborted, FuzzConfig, run_fuzz
from .linalg import NoConvergenceError, abs_op, load_matrix
from .norms import OPERATOR, eval_norm, parse_norm
from .radii import (
    OptimizerStallError,
    brute_force_dw,
    classical_dw_radius,
    generalized_dw_radius,
    generalized_numerical_radius,
    numerical_radius,
)
from ._sweeps import ThetaOptimum

_NUMERICAL_ERRORS = (NoConvergenceError, OptimizerStallError)


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _g(x: float) -> str:
    """Text mode prints 9 significant digits."""
    return f"{x:.9g}"


def _parse_norms(arg: str):
    try:
        return [parse_norm(tok.strip()) for tok in arg.split(",") if tok.strip()] or [OPERATOR]
    except ValueError as e:
        raise CliError(2, f"bad norm list {arg!r}: {e}")


def _load_matrices(arg: str):
    paths = [p.strip() for p in arg.split(",") if p.strip()]
    if not paths:
        raise CliError(2, "empty --matrix argument")
    mats = []
    for p in paths:
        try:
            mats.append((p, load_matrix(p)))
        except FileNotFoundError:
            raise CliError(2, f"matrix file not found: {p}")
        except (ValueError, json.JSONDecodeError) as e:
            raise CliError(2, f"cannot parse matrix file {p}: {e}")
    return mats


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _result_dict(r) -> dict:
    w = r.witness
    if isinstance(w, ThetaOptimum):
        wit = {
            "theta": w.theta_star,
            "grid_points": w.grid_points,
            "bracket_width": w.bracket_width,
        }
    elif isinstance(w, np.ndarray):
        wit = {"re": w.real.tolist(), "im": w.imag.tolist()}
    else:
        wit = w
    d = {
        "quantity": r.quantity,
        "value": r.value,
        "method": r.method,
        "est_error": r.est_error,
        "witness": wit,
    }
    if r.seed is not None:
        d["seed"] = r.seed
    return d


def _result_text(r) -> str:
    w = r.witness
    if isinstance(w, ThetaOptimum):
        extra = f"theta*={_g(w.theta_star)}"
    elif isinstance(w, np.ndarray) and w.size <= 6:
        entries = ", ".join(f"{_g(z.real)}{z.imag:+.9g}i" for z in w)
        extra = f"x*=[{entries}]"
    elif isinstance(w, np.ndarray):
        extra = f"x* on sphere (n={w.size})"
    else:
        extra = f"witness={w}"
    return f"{_g(r.value)}  ({r.method}, est_error={r.est_error:.2e}, {extra})"


# ---------------------------------------------------------------- compute


def cmd_compute(args) -> int:
    mats = _load_matrices(args.matrix)
    specs = _parse_norms(args.norms)
    results = []
    for path, t in mats:
        w = numerical_radius(t)
        dw = classical_dw_radius(t)
        per_norm = {}
        for spec in specs:
            per_norm[spec.label()] = {
                "w_N": _result_dict(generalized_numerical_radius(t, spec)),
                "dw_N": _result_dict(generalized_dw_radius(t, spec)),
            }
        results.append(
            {
                "matrix": path,
                "n": int(t.shape[0]),
                "w": _result_dict(w),
                "dw": _result_dict(dw),
                "per_norm": per_norm,
                "_objs": (t, w, dw),
            }
        )

    if args.format == "json":
        for r in results:
            r.pop("_objs")
        _emit(json.dumps(results if len(results) > 1 else results[0], indent=2), args.out)
    elif args.format == "csv":
        lines = ["matrix,norm,quantity,value,est_error"]
        for r in results:
            lines.append(f"{r['matrix']},,w,{r['w']['value']!r},{r['w']['est_error']!r}")
            lines.append(f"{r['matrix']},,dw,{r['dw']['value']!r},{r['dw']['est_error']!r}")
            for label, d in r["per_norm"].items():
                for q in ("w_N", "dw_N"):
                    lines.append(
                        f"{r['matrix']},{label},{q},{d[q]['value']!r},{d[q]['est_error']!r}"
                    )
        _emit("\n".join(lines), args.out)
    else:
        lines = []
        for r in results:
            t, w, dw = r.pop("_objs")
            lines.append(f"matrix {r['matrix']}  (n={r['n']})")
            lines.append(f"  w    = {_result_text(w)}")
            lines.append(f"  dw   = {_result_text(dw)}")
            for label, d in r["per_norm"].items():
                wn, dwn = d["w_N"], d["dw_N"]
                lines.append(
                    f"  [{label}] w_N  = {_g(wn['value'])}  "
                    f"(theta*={_g(wn['witness']['theta'])}, est_error={wn['est_error']:.2e})"
                )
                lines.append(
                    f"  [{label}] dw_N = {_g(dwn['value'])}  "
                    f"(theta*={_g(dwn['witness']['theta'])}, est_error={dwn['est_error']:.2e})"
                )
        _emit("\n".join(lines), args.out)
    return 0


# ---------------------------------------------------------------- bounds


def cmd_bounds(args) -> int:
    mats = _load_matrices(args.matrix)
    if len(mats) > 2:
        raise CliError(2, "bounds takes one matrix, or two comma-separated for the triangle bounds")
    specs = _parse_norms(args.norms)
    t = mats[0][1]
    s = mats[1][1] if len(mats) == 2 else None
    per_norm = evaluate_matrix(t, specs, s)

    violated = False
    for label, ev in per_norm.items():
        for r in ev.reports:
            if r.applicable and not r.satisfied and r.bound.id != "B_REFUTED_UP":
                violated = True

    if args.format == "json":
        obj = {
            "matrices": [p for p, _ in mats],
            "per_norm": {
                label: [report_to_dict(r) for r in ev.reports]
                for label, ev in per_norm.items()
            },
        }
        _emit(json.dumps(obj, indent=2), args.out)
    elif args.format == "csv":
        lines = ["norm,bound,side,lhs,rhs,margin,applicable,satisfied"]
        for label, ev in per_norm.items():
            for r in ev.reports:
                lines.append(
                    f"{label},{r.bound.id},{r.bound.side},{r.lhs!r},{r.rhs!r},"
                    f"{r.margin!r},{r.applicable},{r.satisfied}"
                )
        _emit("\n".join(lines), args.out)
    else:
        lines = [f"matrix {mats[0][0]}" + (f" + {mats[1][0]}" if s is not None else "")]
        for label, ev in per_norm.items():
            lines.append(f"norm {label}:")
            for r in ev.reports:
                if not r.applicable:
                    status = "skipped"
                    lines.append(f"  {r.bound.id:<14} {status}")
                    continue
                status = "ok" if r.satisfied else "VIOLATED"
                if r.bound.id == "B_REFUTED_UP" and not r.satisfied:
                    status = "VIOLATED (expected: refuted bound)"
                lines.append(
                    f"  {r.bound.id:<14} {r.bound.side:<12} lhs={_g(r.lhs):>13} "
                    f"rhs={_g(r.rhs):>13} margin={r.margin:+.3e}  {status}"
                )
        _emit("\n".join(lines), args.out)
    return 1 if violated else 0


# ---------------------------------------------------------------- fuzz


def cmd_fuzz(args) -> int:
    try:
        cfg = FuzzConfig(
            seed=args.seed,
            dims=tuple(int(d) for d in args.dims.split(",") if d.strip()),
            classes=CLASSES if args.classes == "all" else tuple(
                c.strip() for c in args.classes.split(",") if c.strip()
            ),
            norms=tuple(_parse_norms(args.norms)),
            count_per_cell=args.count,
        )
    except ValueError as e:
        raise CliError(2, f"bad fuzz configuration: {e}")

    def render(rep) -> str:
        if args.format == "json":
            return rep.to_json()
        if args.format == "csv":
            return rep.to_csv()
        return rep.to_text()

    try:
        rep = run_fuzz(cfg)
    except FuzzAborted as e:
        _emit(render(e.report), args.out)
        print(f"fuzz aborted: {e}", file=sys.stderr)
        return 4
    _emit(render(rep), args.out)
    if args.format != "text":
        print(
            f"fuzz: {rep.total_samples} samples, "
            f"{rep.unexpected_violations()} unexpected violations, "
            f"{rep.refuted_violations()} refuted-bound violations, "
            f"{rep.elapsed:.1f}s",
            file=sys.stderr,
        )
    return 0 if rep.unexpected_violations() == 0 else 1


# ---------------------------------------------------------------- paper examples


def _grid_w(t: np.ndarray) -> float:
    """Numerical radius by a dense theta grid over numpy eigvalsh — kept
    independent of the sweep engine so example checks cross two code paths."""
    th = np.linspace(0.0, 2.0 * np.pi, 20001)
    re = (t + t.conj().T) / 2.0
    im = (t - t.conj().T) / (2.0j)
    h = np.cos(th)[:, None, None] * re - np.sin(th)[:, None, None] * im
    return float(np.abs(np.linalg.eigvalsh(h)).max())


def _opnorm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a, 2))


def _remark_values_direct(t: np.ndarray) -> dict:
    """Direct substitution of the final-remark formulas using plain numpy."""
    w = _grid_w(t)
    n4 = _opnorm(t) ** 4
    re_n = _opnorm((t + t.conj().T) / 2.0)
    im_n = _opnorm((t - t.conj().T) / 2.0j)
    m1 = max(re_n**2 + n4, w**2)
    m2 = max(im_n**2, n4)
    d1 = abs(re_n**2 + n4 - w**2)
    d2 = abs(im_n**2 - n4)
    tail = (d1 + d2) + 2.0 * abs(m1 - m2)
    s2 = _opnorm(t.conj().T @ t + t @ t.conj().T)
    t2 = _opnorm(t @ t + (t @ t).conj().T)
    return {
        "B_THM28": 0.5 * math.sqrt(0.75 * _opnorm(t) ** 2 + 2.0 * n4 + tail),
        "B_EQP1": 0.5 * math.sqrt(0.5 * s2 + w**2 + 2.0 * n4 + tail),
        "B_EQP2": 0.5 * math.sqrt(0.5 * t2 + w**2 + 2.0 * n4 + tail),
    }


def cmd_paper_examples(args) -> int:
    checks: list[tuple[str, str, str]] = []  # (status, name, detail)

    def check(name: str, value: float, expected: float, tol: float, exact: bool = False):
        err = abs(value - expected)
        ok = (value == expected) if exact else (err <= tol)
        checks.append(
            (
                "PASS" if ok else "FAIL",
                name,
                f"value={_g(value)} expected={_g(expected)} |err|={err:.2e}"
                + ("" if exact else f" tol={tol:g}"),
            )
        )

    nil = np.array([[0.0, 2.0], [0.0, 0.0]], dtype=complex)

    dwn = generalized_dw_radius(nil, OPERATOR).value
    check("dw_N^2(nilpotent, op) = 17", dwn**2, 17.0, 1e-6)

    dw_cl = classical_dw_radius(nil).value
    check("classical dw^2(nilpotent) = 16", dw_cl**2, 16.0, 1e-4)

    w_nil = numerical_radius(nil).value
    check("w(nilpotent) = 1", w_nil, 1.0, 1e-8)
    check("||  |T|  ||(nilpotent) = 2 (exact)", eval_norm(OPERATOR, abs_op(nil)), 2.0, 0.0, exact=True)

    eye = np.eye(3, dtype=complex)
    dw_eye = generalized_dw_radius(eye, OPERATOR).value
    check("dw_N(I, op) = sqrt(2)", dw_eye, math.sqrt(2.0), 1e-9)
    refuted = refuted_upper_value(eye, OPERATOR)
    check("refuted_upper_value(I, op) = 1", refuted, 1.0, 1e-9)
    checks.append(
        (
            "PASS" if dw_eye > refuted + 1e-9 else "FAIL",
            "identity violates the refuted upper bound",
            f"dw_N={_g(dw_eye)} > claimed bound={_g(refuted)}",
        )
    )

    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([20260814, 3])))
    q, _ = np.linalg.qr((rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))) / np.sqrt(2))
    proj = q[:, :2] @ q[:, :2].conj().T
    proj = (proj + proj.conj().T) / 2.0
    dw_p = generalized_dw_radius(proj, OPERATOR).value
    check("dw_N^2(projection, op) = 2", dw_p**2, 2.0, 1e-9)
    for bid in ("B_EQB1", "B_EQB2"):
        rep = evaluate_bound(bid, proj, OPERATOR)
        checks.append(
            (
                "PASS" if rep.applicable and abs(rep.margin) <= 1e-6 else "FAIL",
                f"{bid} sharp on projection",
                f"margin={rep.margin:+.2e} (|margin| <= 1e-6)",
            )
        )

    md = compute_md(nil, OPERATOR)
    md_ok = (md.m1, md.m2, md.d1, md.d2) == (17.0, 16.0, 16.0, 15.0)
    checks.append(
        (
            "PASS" if md_ok else "FAIL",
            "m/d quadruple(nilpotent, op) = (17, 16, 16, 15) exactly",
            f"got ({_g(md.m1)}, {_g(md.m2)}, {_g(md.d1)}, {_g(md.d2)})",
        )
    )

    direct = _remark_values_direct(nil)
    for bid, expected in (("B_THM28", math.sqrt(17.0)), ("B_EQP1", math.sqrt(17.0))):
        rep = evaluate_bound(bid, nil, OPERATOR)
        err_cat = abs(rep.lhs - expected)
        err_dir = abs(direct[bid] - expected)
        checks.append(
            (
                "PASS" if err_cat <= 1e-8 and err_dir <= 1e-8 else "FAIL",
                f"{bid}(nilpotent, op) = sqrt(17)",
                f"catalog={_g(rep.lhs)} direct={_g(direct[bid])} |err|={max(err_cat, err_dir):.2e}",
            )
        )

    eqp2 = evaluate_bound("B_EQP2", nil, OPERATOR)
    expected_eqp2 = 0.5 * math.sqrt(66.0)
    agree = abs(eqp2.lhs - direct["B_EQP2"]) <= 1e-8 and abs(eqp2.lhs - expected_eqp2) <= 1e-8
    checks.append(
        (
            "PASS" if agree else "FAIL",
            "B_EQP2(nilpotent, op) matches direct substitution (sqrt(66)/2)",
            f"catalog={_g(eqp2.lhs)} direct={_g(direct['B_EQP2'])}",
        )
    )
    checks.append(
        (
            "EXPECTED-DISCREPANCY",
            "B_EQP2 vs quoted sqrt(17)",
            f"formula gives {_g(expected_eqp2)}, quoted value is {_g(math.sqrt(17.0))}; "
            f"the inequality itself still holds (margin={eqp2.margin:+.3e})",
        )
    )

    low = evaluate_bound("B_LOW", nil, OPERATOR)
    check("B_LOW(nilpotent, op) = sqrt(3)", low.lhs, math.sqrt(3.0), 1e-8)

    failed = any(st == "FAIL" for st, _, _ in checks)
    if args.format == "json":
        obj = [{"status": st, "name": name, "detail": detail} for st, name, detail in checks]
        _emit(json.dumps(obj, indent=2), args.out)
    elif args.format == "csv":
        lines = ["status,name,detail"]
        for st, name, detail in checks:
            lines.append(f"{st},\"{name}\",\"{detail}\"")
        _emit("\n".join(lines), args.out)
    else:
        width = max(len(name) for _, name, _ in checks)
        lines = [f"{st:<21} {name:<{width}}  {detail}" for st, name, detail in checks]
        n_pass = sum(1 for st, _, _ in checks if st == "PASS")
        lines.append(f"{n_pass} PASS, {sum(1 for st, _, _ in checks if st == 'FAIL')} FAIL, "
                     f"{sum(1 for st, _, _ in checks if st == 'EXPECTED-DISCREPANCY')} expected discrepancy")
        _emit("\n".join(lines), args.out)
    return 1 if failed else 0


# ---------------------------------------------------------------- counterexample


def cmd_counterexample(args) -> int:
    if args.matrix:
        mats = _load_matrices(args.matrix)
    else:
        mats = [("identity(3)", np.eye(3, dtype=complex))]
    specs = _parse_norms(args.norms)
    rows = []
    exhibited = False
    for path, t in mats:
        for spec in specs:
            dwn = generalized_dw_radius(t, spec).value
            claimed = refuted_upper_value(t, spec)
            violated = dwn > claimed + 1e-12
            exhibited = exhibited or violated
            rows.append(
                {
                    "matrix": path,
                    "norm": spec.label(),
                    "dw_N": dwn,
                    "claimed_upper_bound": claimed,
                    "violated": violated,
                }
            )
    if args.format == "json":
        _emit(json.dumps(rows, indent=2), args.out)
    elif args.format == "csv":
        lines = ["matrix,norm,dw_N,claimed_upper_bound,violated"]
        for r in rows:
            lines.append(
                f"{r['matrix']},{r['norm']},{r['dw_N']!r},{r['claimed_upper_bound']!r},{r['violated']}"
            )
        _emit("\n".join(lines), args.out)
    else:
        lines = []
        for r in rows:
            verdict = (
                "dw_N exceeds the claimed bound — bound refuted"
                if r["violated"]
                else "no violation here"
            )
            lines.append(
                f"{r['matrix']} [{r['norm']}]: dw_N={_g(r['dw_N'])}, "
                f"claimed upper bound={_g(r['claimed_upper_bound'])}  ->  {verdict}"
            )
        _emit("\n".join(lines), args.out)
    return 0 if exhibited else 1


# ---------------------------------------------------------------- entry point


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="dwradius",
        description="Numerical radius and Davis-Wielandt radius computations "
        "under pluggable norms, with a verified inequality catalog.",
    )
    ap.add_argument("--version", action="version", version=f"dwradius {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, matrix_required=True, with_matrix=True):
        if with_matrix:
            p.add_argument(
                "--matrix",
                required=matrix_required,
                help="path to a matrix JSON file; two comma-separated paths where a pair is accepted",
            )
        p.add_argument("--norms", default="op", help="comma-separated norm list (op, fro, tr, sp:<p>, w)")
        p.add_argument("--format", choices=("text", "json", "csv"), default="text")
        p.add_argument("--out", default=None, help="write output to this path instead of stdout")

    p = sub.add_parser("compute", help="radii of a matrix under the given norms")
    common(p)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("bounds", help="bound-catalog table for a matrix (or pair)")
    common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("fuzz", help="randomized verification of the bound catalog")
    common(p, with_matrix=False)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--dims", default="2,3,5", help="comma-separated dimensions")
    p.add_argument("--classes", default="all", help='comma-separated matrix classes, or "all"')
    p.add_argument("--count", type=int, default=200, help="samples per (class, dim) cell")
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("paper-examples", help="reproduce and check the worked examples")
    common(p, with_matrix=False)
    p.set_defaults(func=cmd_paper_examples)

    p = sub.add_parser("counterexample", help="exhibit a violation of the refuted upper bound")
    common(p, matrix_required=False)
    p.set_defaults(func=cmd_counterexample)

    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except _NUMERICAL_ERRORS as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
