"""Command-line interface.

Exit codes: 0 success, 1 a verification check failed, 2 a solver did not
converge, 3 invalid input.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import jsonio
from .charts import big_chart, chi_inverse
from .errors import InputError, SolverError
from .render import Style, render_svg
from .semigroup import RiggedAnnulus, classify, compose_e, from_qs, multiply
from .verify import SUITES, RunConfig, run_verify
from .welding import WeldingProblem, weld

EXIT_OK, EXIT_FAIL, EXIT_SOLVER, EXIT_INPUT = 0, 1, 2, 3


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("run configuration (defaults from $ANNULUS_CONFIG)")
    g.add_argument("--grid-n", type=int, help="boundary samples, a power of two (default 1024)")
    g.add_argument("--trunc-m", type=int, help="series truncation order (default 64)")
    g.add_argument("--tol", type=float, help="welding residual tolerance (default 1e-9)")
    g.add_argument("--delta-touch", type=float, help="curve distance below which curves touch (default 1e-4)")
    g.add_argument("--seed", type=int, help="seed for randomized suites (default 0)")
    g.add_argument("--output-dir", help="directory that relative -o paths resolve against")
    p.add_argument("-o", "--output", help="output file (default: stdout)")
    p.add_argument("-q", "--quiet", action="store_true", help="suppress solver warnings")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="annulus", description="Rigged annuli, conformal welding and charts.")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common()

    p = sub.add_parser("weld", parents=[common], help="welding pair of a circle homeomorphism")
    p.add_argument("--phi", required=True, help="circle_homeo JSON")
    p.add_argument("--a-re", type=float, default=1.0)
    p.add_argument("--a-im", type=float, default=0.0)
    p.add_argument("--m", dest="trunc_m_alias", type=int, help="alias for --trunc-m")
    p.add_argument("--n", dest="grid_n_alias", type=int, help="alias for --grid-n")

    p = sub.add_parser("multiply", parents=[common], help="product x . y of two rigged annuli")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("--seam", help="also write the sewing curve as curve JSON")

    p = sub.add_parser("compose-e", parents=[common], help="product of two bounded univalent elements")
    p.add_argument("x")
    p.add_argument("y")

    p = sub.add_parser("from-qs", parents=[common], help="group element of a circle homeomorphism")
    p.add_argument("phi")

    p = sub.add_parser("chart", parents=[common], help="chart coordinates of a rigged annulus")
    p.add_argument("x")

    p = sub.add_parser("chart-inv", parents=[common], help="disk map with prescribed pre-Schwarzian")
    p.add_argument("u", help="series JSON")
    p.add_argument("--q-re", type=float, default=1.0)
    p.add_argument("--q-im", type=float, default=0.0)

    p = sub.add_parser("classify", parents=[common], help="recompute the class flags of an annulus")
    p.add_argument("x")

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("--suite", default="all", choices=SUITES + ("all",))

    p = sub.add_parser("render", parents=[common], help="SVG picture of curves and annuli")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--width", type=int, default=Style.width)
    p.add_argument("--height", type=int, default=Style.height)
    p.add_argument("--samples", type=int, default=Style.samples)
    return parser


def _config(args) -> RunConfig:
    overrides = {
        "grid_n": getattr(args, "grid_n_alias", None) or args.grid_n,
        "trunc_m": getattr(args, "trunc_m_alias", None) or args.trunc_m,
        "tol": args.tol,
        "delta_touch": args.delta_touch,
        "seed": args.seed,
        "output_dir": args.output_dir,
    }
    return RunConfig.from_env(overrides)


def _emit(text: str, args, cfg: RunConfig, path=None) -> None:
    target = path or args.output
    if target is None:
        sys.stdout.write(text)
        return
    p = Path(target)
    if not p.is_absolute():
        p = Path(cfg.output_dir) / p
    p.write_text(text)


def _run(args) -> int:
    cfg = _config(args)
    cmd = args.command
    if cmd == "weld":
        phi = jsonio.load(args.phi, "circle_homeo")
        a = complex(args.a_re, args.a_im)
        res = weld(WeldingProblem(phi, a=a, trunc_m=cfg.trunc_m, grid_n=cfg.grid_n, tol=cfg.tol))
        tag = "standard" if a == 1 else "a_normalized"
        pair = RiggedAnnulus(res.F, res.G, tag=tag, a=None if a == 1 else a, flags=frozenset({"G"}))
        _emit(jsonio.dumps(pair), args, cfg)
        print(f"weld residual {res.residual:.3e}, condition {res.diagnostics['condition']:.3e}", file=sys.stderr)
        return EXIT_OK
    if cmd in ("multiply", "compose-e"):
        x = jsonio.load(args.x, "rigged_annulus")
        y = jsonio.load(args.y, "rigged_annulus")
        if cmd == "compose-e":
            _emit(jsonio.dumps(compose_e(x, y, n=cfg.grid_n)), args, cfg)
            return EXIT_OK
        diag = []
        out = multiply(x, y, trunc_m=args.trunc_m, n=cfg.grid_n, tol=cfg.tol,
                       delta_touch=cfg.delta_touch, diagnostics=diag)
        _emit(jsonio.dumps(out), args, cfg)
        if args.seam:
            from .riemann import JordanCurve
            _emit(jsonio.dumps(JordanCurve(diag[0].seam, check=False)), args, cfg, args.seam)
        d = diag[0]
        print(f"weld residual {d.weld_residual:.3e}, fit residuals {d.f_fit_residual:.3e} "
              f"/ {d.g_fit_residual:.3e}, flags {out.sorted_flags()}", file=sys.stderr)
        return EXIT_OK
    if cmd == "from-qs":
        phi = jsonio.load(args.phi, "circle_homeo")
        _emit(jsonio.dumps(from_qs(phi, trunc_m=cfg.trunc_m, tol=cfg.tol)), args, cfg)
        return EXIT_OK
    if cmd == "chart":
        x = jsonio.load(args.x, "rigged_annulus")
        _emit(jsonio.dumps(big_chart(x, n=cfg.grid_n)), args, cfg)
        return EXIT_OK
    if cmd == "chart-inv":
        u = jsonio.load(args.u, "series")
        q = complex(args.q_re, args.q_im)
        _emit(jsonio.dumps(chi_inverse(u, q, args.trunc_m or max(u.size, cfg.trunc_m))), args, cfg)
        return EXIT_OK
    if cmd == "classify":
        x = jsonio.load(args.x, "rigged_annulus")
        flags = classify(x, cfg.delta_touch, cfg.grid_n)
        out = x.with_flags(flags)
        _emit(jsonio.dumps(out), args, cfg)
        print("flags: " + (", ".join(out.sorted_flags()) or "none (curves overlap)"), file=sys.stderr)
        return EXIT_OK
    if cmd == "verify":
        report = run_verify(cfg, args.suite)
        _emit(report.to_json(), args, cfg)
        print(report.summary_text(), file=sys.stderr)
        return report.exit_code
    if cmd == "render":
        objects = [jsonio.load(path) for path in args.inputs]
        style = Style(width=args.width, height=args.height, samples=args.samples)
        _emit(render_svg(objects, style, paths=args.inputs), args, cfg)
        return EXIT_OK
    raise AssertionError(cmd)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.ERROR if args.quiet else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return _run(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SolverError as exc:
        print(f"solver error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
