"""Command-line front end: ``qdisk <subcommand> ...``.

Exit codes: 0 success (or all checks passed), 1 a verification failed,
2 usage, parse or parameter error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .combinatorics import EnumerationTooLarge
from .deformation import dmul, dnorm, fiber_eval, fiber_norm_profile, parse_grid
from .free_series import FREE_FAMILIES, FreeSeries, fmul, fnorm, sprad_profile
from .io import SeriesParseError, format_series, read_series
from .quantum_series import QUANTUM_FAMILIES, QContext, QSeries, normal_order, qmul, qnorm
from .quotient import QuotientProblem, section_kappa, solve_quotient
from .scalars import format_scalar, parse_scalar
from .starprod import rieffel_defect, star
from .verify import SUITES, VerifyConfig, run_verify


class UsageError(Exception):
    pass


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--n", type=int, default=2, help="alphabet size (default 2)")
    g.add_argument("--cap", type=int, default=None, help="degree cap")
    g.add_argument("--q", default=None, help="deformation parameter, e.g. 1/2, 3/5+4/5*i, (0.6,0.8)")
    g.add_argument("--rho", type=float, default=1.0, help="radius (default 1)")
    g.add_argument("--tau", type=float, default=1.0, help="second radius, >= 1 (default 1)")
    g.add_argument("--seed", type=int, default=0, help="PRNG seed (default 0)")
    g.add_argument("--json", action="store_true", help="machine-readable output")
    return p


def _load_q(path, args):
    f, ctx = read_series(path, "q")
    if args.q is not None:
        ctx = QContext(f.n, parse_scalar(args.q))
    return f, ctx


def _series_json(series) -> dict:
    if isinstance(series, FreeSeries):
        terms = [[list(w), format_scalar(c)] for w, c in series.items()]
        return {"kind": "freeseries", "n": series.n, "cap": series.cap, "terms": terms,
                "truncated": series.truncated}
    if isinstance(series, QSeries):
        terms = [[list(k), format_scalar(c)] for k, c in series.items()]
        return {"kind": "qseries", "n": series.n, "cap": series.cap, "terms": terms,
                "truncated": series.truncated}
    terms = [[list(k), p, format_scalar(c)] for (k, p), c in series.items()]
    return {"kind": "defoseries", "n": series.n, "cap": series.cap, "zwin": series.zwin,
            "terms": terms, "truncated": series.truncated}


def _emit_series(args, series, ctx=None):
    if args.json:
        print(json.dumps(_series_json(series)))
    else:
        sys.stdout.write(format_series(series, ctx))
        if series.truncated:
            print("# truncated: terms above the degree cap were dropped", file=sys.stderr)


def _emit_value(args, name, value, **extra):
    if args.json:
        print(json.dumps({name: value, **extra}))
    else:
        for key, val in extra.items():
            print(f"{key}: {val}")
        print(f"{name}: {value!r}")


# --- subcommands ---------------------------------------------------------------


def cmd_mul(args):
    first = read_series(args.left)
    if isinstance(first, tuple):
        f, ctx = _load_q(args.left, args)
        g, _ = read_series(args.right, "q")
        _emit_series(args, qmul(f, g, ctx), ctx)
    elif isinstance(first, FreeSeries):
        _emit_series(args, fmul(first, read_series(args.right, "free")))
    else:
        _emit_series(args, dmul(first, read_series(args.right, "defo")))
    return 0


def cmd_normal_order(args):
    f = read_series(args.file, "free")
    if args.q is None:
        raise UsageError("normal-order needs --q")
    ctx = QContext(f.n, parse_scalar(args.q))
    _emit_series(args, normal_order(f, ctx), ctx)
    return 0


def cmd_norm(args):
    obj = read_series(args.file)
    if isinstance(obj, tuple):
        f, ctx = _load_q(args.file, args)
        family = args.family or "polydisk"
        if family not in QUANTUM_FAMILIES:
            raise UsageError(f"qseries families: {', '.join(QUANTUM_FAMILIES)}")
        value = qnorm(f, ctx, family, args.rho)
    elif isinstance(obj, FreeSeries):
        family = args.family or "taylor"
        if family not in FREE_FAMILIES:
            raise UsageError(f"freeseries families: {', '.join(FREE_FAMILIES)}")
        value = fnorm(obj, family, args.rho, args.tau)
    else:
        family = "defo"
        value = dnorm(obj, args.rho, args.tau)
    _emit_value(args, "norm", value, family=family)
    return 0


def cmd_quotient(args):
    f, ctx = _load_q(args.target, args)
    res = solve_quotient(QuotientProblem(f, ctx, args.rho, args.geometry))
    if args.json:
        print(json.dumps({"geometry": args.geometry, "closed_form": res.closed_form,
                          "oracle": res.oracle, "rel_gap": res.rel_gap,
                          "max_residual": res.max_residual}))
    else:
        print(f"geometry: {args.geometry}")
        print(f"closed_form: {res.closed_form!r}")
        print(f"oracle: {res.oracle!r}")
        print(f"rel_gap: {res.rel_gap:.3e}")
    return 0


def cmd_kappa(args):
    try:
        k = tuple(int(t) for t in args.k.split(","))
    except ValueError:
        raise UsageError(f"bad multi-index {args.k!r}") from None
    ctx = QContext(len(k), parse_scalar(args.q) if args.q else 1)
    _emit_series(args, section_kappa(k, ctx, args.geometry))
    return 0


def cmd_fiber(args):
    a = read_series(args.file, "defo")
    if args.q is None:
        raise UsageError("fiber needs --q")
    ctx = QContext(a.n, parse_scalar(args.q))
    _emit_series(args, fiber_eval(a, ctx), ctx)
    return 0


def cmd_profile(args):
    a = read_series(args.file, "defo")
    grid = parse_grid(args.grid)
    values = fiber_norm_profile(a, args.rho, args.geometry, grid)
    if args.json:
        rows = [{"q_re": complex(q).real, "q_im": complex(q).imag, "abs_q": abs(q), "norm": v}
                for q, v in zip(grid, values)]
        print(json.dumps({"geometry": args.geometry, "rho": args.rho, "profile": rows}))
    else:
        print("q_re,q_im,abs_q,norm")
        for q, v in zip(grid, values):
            z = complex(q)
            print(f"{z.real!r},{z.imag!r},{abs(z)!r},{v!r}")
    return 0


def cmd_star(args):
    f, _ = read_series(args.left, "q")
    g, _ = read_series(args.right, "q")
    out = star(f, g, args.order)
    if args.json:
        print(json.dumps({"order": args.order, "coeffs": [_series_json(c) for c in out.coeffs]}))
    else:
        for m, c in enumerate(out.coeffs):
            print(f"# h^{m}")
            sys.stdout.write(format_series(c, QContext(c.n, 1)))
    return 0


def cmd_defect(args):
    f, _ = read_series(args.left, "q")
    g, _ = read_series(args.right, "q")
    value = rieffel_defect(f, g, args.h, args.rho)
    _emit_value(args, "defect", value, h=args.h, rho=args.rho)
    return 0


def cmd_sprad(args):
    n, d_max = args.n, args.dmax
    if args.family == "taylor":
        def ev(w):
            return fnorm(FreeSeries({w: 1}, n, len(w)), "taylor", args.rho)
    elif args.family == "universal":
        def ev(w):
            return fnorm(FreeSeries({w: 1}, n, len(w)), "universal", args.rho, args.tau)
    else:
        ctx = QContext(n, parse_scalar(args.q) if args.q else 1)

        def ev(w):
            x = normal_order(FreeSeries({w: 1}, n, len(w)), ctx)
            return qnorm(x, ctx, "polydisk", args.rho)
    profile = sprad_profile(ev, d_max, n)
    if args.json:
        print(json.dumps({"family": args.family, "profile": profile}))
    else:
        for d, r in enumerate(profile, start=1):
            print(f"{d},{r!r}")
    return 0


def cmd_verify(args):
    cfg = VerifyConfig(seed=args.seed, n_max=args.n_max, k_max=args.k_max, cases=args.cases,
                       order=args.order, depth=args.depth, tol=args.tol)
    if args.q is not None:
        parse_scalar(args.q)
        cfg.qs = (args.q,)
    reports = run_verify(args.suite, cfg)
    # reports are always JSON lines; --json is accepted for symmetry
    for rep in reports:
        print(json.dumps(rep.to_dict(timing=args.timing), sort_keys=True))
    return 0 if all(r.ok for r in reports) else 1


# --- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="qdisk", description="Quantum polydisk and ball algebra toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mul", parents=[common], help="multiply two series of the same kind")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(func=cmd_mul)

    p = sub.add_parser("normal-order", parents=[common], help="free series -> q-series")
    p.add_argument("file")
    p.set_defaults(func=cmd_normal_order)

    p = sub.add_parser("norm", parents=[common], help="norm of a series file")
    p.add_argument("file")
    p.add_argument("--family", choices=FREE_FAMILIES + QUANTUM_FAMILIES, default=None)
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("quotient", parents=[common], help="quotient norm: closed form vs oracle")
    p.add_argument("--target", required=True)
    p.add_argument("--geometry", choices=("polydisk", "ball"), default="polydisk")
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("kappa", parents=[common], help="norm-attaining preimage of x^k")
    p.add_argument("--k", required=True, help="multi-index, e.g. 1,1")
    p.add_argument("--geometry", choices=("polydisk", "ball"), default="ball")
    p.set_defaults(func=cmd_kappa)

    p = sub.add_parser("fiber", parents=[common], help="substitute z = q in a defo series")
    p.add_argument("file")
    p.set_defaults(func=cmd_fiber)

    p = sub.add_parser("profile", parents=[common], help="fibre norms over a q grid (CSV)")
    p.add_argument("file")
    p.add_argument("--geometry", choices=("polydisk", "ball"), default="polydisk")
    p.add_argument("--grid", required=True, help="start:stop:num[@angle]")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("star", parents=[common], help="star product truncated at h^N")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--order", type=int, default=3)
    p.set_defaults(func=cmd_star)

    p = sub.add_parser("defect", parents=[common], help="Rieffel defect at h")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--h", type=float, required=True)
    p.set_defaults(func=cmd_defect)

    p = sub.add_parser("sprad", parents=[common], help="spectral-radius profile of the generators")
    p.add_argument("--family", choices=("taylor", "universal", "polydisk"), default="taylor")
    p.add_argument("--dmax", type=int, default=10)
    p.set_defaults(func=cmd_sprad)

    p = sub.add_parser("verify", parents=[common], help="run self-check suites")
    p.add_argument("suite", nargs="?", default="all", choices=SUITES + ("all",))
    p.add_argument("--n-max", type=int, default=3)
    p.add_argument("--k-max", type=int, default=6)
    p.add_argument("--cases", type=int, default=100)
    p.add_argument("--order", type=int, default=6)
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--timing", action="store_true", help="include wall time in reports")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, SeriesParseError, EnumerationTooLarge, ValueError, OSError) as exc:
        print(f"qdisk {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
