"""Command-line front end.

Every subcommand emits one machine-readable table (JSON by default, CSV on
request).  Big integers are serialized as decimal strings and every huge
magnitude is accompanied by a log10 column, so no row ever needs a float
that would overflow.

Exit codes: 0 success, 2 domain error, 3 tolerance/precision failure,
4 internal consistency fault.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction

import mpmath as mp
import numpy as np

from . import asymptotics, measures, saddle, selftest, zeros
from .asymptotics import BranchCutDomainError
from .exact import (
    ConsistencyError,
    PrecisionExhaustedError,
    SequenceMethod,
    apery_poly,
    apery_sequence_rec,
    apery_sequence_sum,
    eval_certified,
    eval_exact,
)

SCHEMA = "apery-table/1"

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_TOLERANCE = 3
EXIT_CONSISTENCY = 4


def parse_number(text: str):
    """Rational or decimal literal -> Fraction (exact where possible)."""
    return Fraction(text)


def parse_complex(text: str):
    """'re' or 're,im' with decimal/rational parts; exact Fraction if im == 0."""
    parts = text.split(",")
    if len(parts) == 1:
        return Fraction(parts[0])
    if len(parts) == 2:
        re, im = Fraction(parts[0]), Fraction(parts[1])
        if im == 0:
            return re
        return complex(re, im)
    raise ValueError(f"cannot parse complex literal {text!r}; expected 're' or 're,im'")


def _fmt_z(z) -> str:
    if isinstance(z, Fraction):
        return str(z)
    return f"{z.real:g},{z.imag:g}"


def emit(args, columns: list[str], rows: list[dict], meta: dict | None = None) -> None:
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=columns)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
        text = buf.getvalue()
    else:
        doc = {
            "schema": SCHEMA,
            "command": args.command,
            "precision": "float64 unless a column is a decimal string",
            "columns": columns,
            "rows": rows,
        }
        if meta:
            doc["meta"] = meta
        text = json.dumps(doc, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_numbers(args) -> int:
    method = SequenceMethod(args.method)
    seq = apery_sequence_rec(args.n_max) if method is SequenceMethod.RECURRENCE else apery_sequence_sum(args.n_max)
    rows = []
    with mp.workdps(30):
        for n, v in enumerate(seq.values):
            row = {
                "n": n,
                "b_n": str(v),
                "log10_b_n": float(mp.log10(v)) if v > 0 else 0.0,
                "ratio": float(mp.mpf(v) / seq.values[n - 1]) if n >= 1 else None,
                "cohen_ratio": float(mp.mpf(v) / asymptotics.cohen_approx(n)) if n >= 1 else None,
            }
            rows.append(row)
    emit(args, ["n", "b_n", "log10_b_n", "ratio", "cohen_ratio"], rows, {"method": method.value})
    return EXIT_OK


def cmd_asymp(args) -> int:
    rows = []
    skipped = []
    for n in args.n:
        for z in args.z:
            if n < 1:
                skipped.append({"n": n, "z": _fmt_z(z), "note": "leading term needs n >= 1"})
                continue
            p = apery_poly(n)
            cert = eval_certified(p, z, rel_tol=args.tol)
            with mp.workdps(60):
                approx = asymptotics.leading_term(n, complex(z), dps=60)
                rel = float(abs(cert.value / approx - 1))
                rows.append(
                    {
                        "n": n,
                        "z": _fmt_z(z),
                        "log10_abs_exact": float(mp.log10(abs(cert.value))),
                        "log10_abs_approx": float(mp.log10(abs(approx))),
                        "rel_err": rel,
                    }
                )
    emit(args, ["n", "z", "log10_abs_exact", "log10_abs_approx", "rel_err"], rows, {"skipped": skipped})
    return EXIT_OK


def cmd_oscillation(args) -> int:
    n = args.n
    if args.theta:
        thetas = [float(t) for t in args.theta]
    else:
        thetas = list(np.linspace(0.1, 0.9, args.grid))
    p = apery_poly(n)
    rows = []
    for th in thetas:
        x = Fraction(asymptotics.x_from_theta(th)).limit_denominator(10**6)
        form = asymptotics.oscillatory_approx(n, float(x))
        exact = eval_exact(p, -x)
        with mp.workdps(60):
            ex = mp.mpf(exact.numerator) / exact.denominator
            approx = form.value(60)
            gated = abs(math.cos(form.phase)) >= 0.5
            rows.append(
                {
                    "theta": form.theta,
                    "x": str(x),
                    "sign_exact": int(mp.sign(ex)),
                    "log10_envelope": form.log_envelope / math.log(10),
                    "phase": form.phase,
                    "cos_phase": math.cos(form.phase),
                    "rel_residual": float(abs(ex / approx - 1)) if gated else None,
                    "gated": gated,
                    "domain_warning": form.domain_warning,
                }
            )
    emit(
        args,
        ["theta", "x", "sign_exact", "log10_envelope", "phase", "cos_phase", "rel_residual", "gated", "domain_warning"],
        rows,
    )
    return EXIT_OK


def cmd_zeros(args) -> int:
    zs = zeros.isolate_zeros(apery_poly(args.n), iso_tol=args.tol)
    rows = [
        {"index": i, "lower": str(a), "upper": str(b), "midpoint": float((a + b) / 2)}
        for i, (a, b) in enumerate(zs.intervals)
    ]
    emit(args, ["index", "lower", "upper", "midpoint"], rows, {"n": args.n, "count": zs.count, "domain": zs.domain.value})
    return EXIT_OK


def cmd_measure(args) -> int:
    model = measures.nu_model() if args.kind == "nu" else measures.mu_model()
    if args.kind == "nu":
        xs = np.linspace(-1.0, 1.0, args.grid + 2)[1:-1]
        mass = measures.nu_mass()
    else:
        xs = -np.logspace(-3, 3, args.grid)
        mass = measures.mu_mass()
    rows = [{"x": float(x), "density": model.density(float(x)), "cdf": model.cdf(float(x))} for x in xs]
    emit(args, ["x", "density", "cdf"], rows, {"kind": args.kind, "mass": mass})
    return EXIT_OK


def cmd_potential(args) -> int:
    model = measures.nu_model() if args.kind == "nu" else measures.mu_model()
    rows = []
    for z in args.z:
        zc = complex(z)
        closed = model.potential(zc)
        quadv = measures.potential_from_density(zc, args.kind, tol=args.tol)
        rows.append({"z": _fmt_z(z), "closed_form": closed, "quadrature": quadv, "abs_diff": abs(closed - quadv)})
    emit(args, ["z", "closed_form", "quadrature", "abs_diff"], rows, {"kind": args.kind, "robin_constant": model.robin_constant})
    return EXIT_OK


def cmd_saddle_verify(args) -> int:
    z = args.z[0] if args.z else Fraction(1)
    n, M = args.n, args.grid
    prob = saddle.apery_saddle_problem(complex(z))
    est = saddle.saddle_estimate(prob, n)
    with mp.workdps(60):
        lt = asymptotics.leading_term(n, complex(z), dps=60)
        rel_saddle = float(abs(est.value.to_mpc(60) / lt - 1))
    integral = saddle.direct_integral(prob, n, M)
    p = apery_poly(n)
    zc = complex(z)
    exact = complex(eval_certified(p, z, rel_tol=1e-20).value) if zc.imag else complex(eval_exact(p, z))
    rows = [
        {
            "n": n,
            "z": _fmt_z(z),
            "grid": M,
            "saddle_vs_leading_rel": rel_saddle,
            "integral_vs_exact_rel": abs(integral - exact) / abs(exact),
            "det_hess_closed_abs": abs(saddle.apery_det_hess_closed(complex(z))),
            "branch_steps": est.branch_certificate.steps,
        }
    ]
    emit(
        args,
        ["n", "z", "grid", "saddle_vs_leading_rel", "integral_vs_exact_rel", "det_hess_closed_abs", "branch_steps"],
        rows,
    )
    if rows[0]["saddle_vs_leading_rel"] > args.tol or rows[0]["integral_vs_exact_rel"] > args.tol:
        return EXIT_TOLERANCE
    return EXIT_OK


def cmd_lemma32(args) -> int:
    if args.x is not None:
        rep = saddle.verify_modulus_max(M=args.grid, continued_x=float(args.x))
        meta = {"continued_x": float(args.x)}
    else:
        z = args.z[0] if args.z else Fraction(1)
        rep = saddle.verify_modulus_max(complex(z), M=args.grid)
        meta = {"z": _fmt_z(z)}
    rows = [
        {"t1": m[0], "t2": m[1], "t3": m[2], "is_argmax": m == rep.argmax}
        for m in rep.local_maxima
    ]
    meta.update({"argmax": list(rep.argmax), "max_value": rep.max_value, "value_at_origin": rep.value_at_origin, "strict": rep.strict})
    emit(args, ["t1", "t2", "t3", "is_argmax"], rows, meta)
    return EXIT_OK


def cmd_selftest(args) -> int:
    return selftest.run(verbose=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="apery", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=["json", "csv"], default="json")
        p.add_argument("--out", default=None, help="write the table to this path instead of stdout")
        p.add_argument("--threads", type=int, default=1, help="worker threads for batch operations")

    p = sub.add_parser("numbers", help="exact integer sequence with ratio columns")
    p.add_argument("--n-max", type=int, default=20)
    p.add_argument("--method", choices=["recurrence", "direct_sum"], default="recurrence")
    common(p)
    p.set_defaults(func=cmd_numbers)

    p = sub.add_parser("asymp", help="exact values vs the closed-form leading term")
    p.add_argument("--n", type=int, nargs="+", default=[50, 100, 200])
    p.add_argument("--z", type=parse_complex, nargs="+", default=[Fraction(1)])
    p.add_argument("--tol", type=float, default=1e-20, help="certified-evaluation relative tolerance")
    common(p)
    p.set_defaults(func=cmd_asymp)

    p = sub.add_parser("oscillation", help="envelope/phase table on the negative axis")
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--theta", type=parse_number, nargs="*", default=None)
    p.add_argument("--grid", type=int, default=9, help="theta grid size if --theta not given")
    common(p)
    p.set_defaults(func=cmd_oscillation)

    p = sub.add_parser("zeros", help="exact isolating intervals for all roots")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-9, help="isolation interval width")
    common(p)
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("measure", help="limit density and CDF table")
    p.add_argument("--kind", choices=["nu", "mu"], default="nu")
    p.add_argument("--grid", type=int, default=21)
    common(p)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("potential", help="closed-form potentials vs quadrature")
    p.add_argument("--kind", choices=["nu", "mu"], default="nu")
    p.add_argument("--z", type=parse_complex, nargs="+", default=[Fraction(5, 2)])
    p.add_argument("--tol", type=float, default=1e-8)
    common(p)
    p.set_defaults(func=cmd_potential)

    p = sub.add_parser("saddle-verify", help="saddle estimate and contour integral vs exact")
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--z", type=parse_complex, nargs="+", default=None)
    p.add_argument("--grid", type=int, default=96, help="quadrature points per dimension")
    p.add_argument("--tol", type=float, default=1e-4)
    common(p)
    p.set_defaults(func=cmd_saddle_verify)

    p = sub.add_parser("lemma32", help="grid verification of the modulus maximum")
    p.add_argument("--z", type=parse_complex, nargs="+", default=None)
    p.add_argument("--x", type=parse_number, default=None, help="verify on the cut at z = -x")
    p.add_argument("--grid", type=int, default=101)
    common(p)
    p.set_defaults(func=cmd_lemma32)

    p = sub.add_parser("selftest", help="run the full verification suite")
    common(p)
    p.set_defaults(func=cmd_selftest)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (BranchCutDomainError, ValueError, IndexError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (PrecisionExhaustedError, measures.ToleranceError) as exc:
        print(f"tolerance failure: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE
    except (ConsistencyError, saddle.NotSimpleSaddleError, saddle.BranchAmbiguityError) as exc:
        print(f"consistency fault: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY


if __name__ == "__main__":
    raise SystemExit(main())
