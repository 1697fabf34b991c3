"""Command-line front end: ``multiphonon {solve,sweep,peaks,verify}``.

Exit codes: 0 on success, 1 on a hard error, 2 when a verification check fails.
"""
from __future__ import annotations

import argparse
import sys

from .params import FockCutoffs, check_order, load_config, validate_regime
from .sweep import (
    AXES, SweepSpec, emit_plot_script, peaks_from_rows, read_csv, rows_to_csv,
    run_sweep, solve_point, write_csv,
)

EXIT_OK, EXIT_ERROR, EXIT_VERIFY = 0, 1, 2


def _orders(text: str) -> list[int]:
    try:
        return [check_order(int(tok)) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad order list {text!r}: {exc}") from None


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multiphonon",
        description="Steady states of a driven optomechanical cavity in the multiphonon polaron picture.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="solve a single parameter point")
    solve.add_argument("--config", required=True, help="key = value parameter file")
    solve.add_argument("--order", type=_orders, help="expansion order N (overrides order_N)")
    solve.add_argument("--obs-tol", type=float, default=1e-3, help="relative tolerance for cutoff escalation")

    sweep = sub.add_parser("sweep", help="scan one parameter and write a CSV table")
    sweep.add_argument("--config", required=True)
    sweep.add_argument("--axis", required=True, choices=AXES)
    sweep.add_argument("--from", dest="start", type=float, required=True)
    sweep.add_argument("--to", dest="stop", type=float, required=True)
    sweep.add_argument("--steps", type=int, required=True)
    sweep.add_argument("--order", type=_orders, help="comma-separated expansion orders, e.g. 1,3")
    sweep.add_argument("--workers", type=int, default=1)
    sweep.add_argument("--out", help="CSV path (default: standard output)")
    sweep.add_argument("--plot", action="store_true", help="also write a matplotlib script next to the CSV")
    sweep.add_argument("--obs-tol", type=float, default=1e-3)

    peaks = sub.add_parser("peaks", help="locate peaks in a sweep CSV")
    peaks.add_argument("csv")
    peaks.add_argument("--column", default="mean_photon")
    peaks.add_argument("--prominence", type=float, default=0.05)
    peaks.add_argument("--order", type=_orders, help="restrict to these orders")

    verify = sub.add_parser("verify", help="run the cross-check suite")
    verify.add_argument("--config", help="parameters for the generator-level checks")
    return parser


def _solve(args) -> int:
    cfg = load_config(args.config)
    N = args.order[0] if args.order else cfg.order
    for warning in validate_regime(cfg.params):
        print(f"# warning: {warning}", file=sys.stderr)
    row = solve_point(cfg.params, N, cfg.cutoffs, obs_tol=args.obs_tol, axis_value=cfg.params.delta)
    if not row["converged"]:
        print("error: steady-state solve failed", file=sys.stderr)
        return EXIT_ERROR
    print(f"# order_N={N} cutoffs=({row['n_max']},{row['m_max']})"
          f" {'fixed' if cfg.cutoffs else 'auto'}")
    print(f"# solver_residual={row['solver_residual']:.3e}")
    sys.stdout.write(rows_to_csv([row]))
    return EXIT_OK


def _sweep(args) -> int:
    cfg = load_config(args.config)
    orders = args.order or [cfg.order]
    if args.workers < 1:
        raise ValueError("--workers must be at least 1")
    rows = []
    for N in orders:
        spec = SweepSpec(args.axis, args.start, args.stop, args.steps, cfg.params, N=N,
                         cutoffs=cfg.cutoffs, obs_tol=args.obs_tol)
        rows.extend(run_sweep(spec, workers=args.workers))
    failed = sum(not r["converged"] for r in rows)
    if failed:
        print(f"# warning: {failed} of {len(rows)} points failed", file=sys.stderr)
    if args.out:
        if args.plot:
            csv_path, script = emit_plot_script(rows, args.out)
            print(f"# wrote {csv_path} and {script}", file=sys.stderr)
        else:
            write_csv(rows, args.out)
    else:
        if args.plot:
            raise ValueError("--plot needs --out")
        sys.stdout.write(rows_to_csv(rows))
    return EXIT_OK


def _peaks(args) -> int:
    rows = read_csv(args.csv)
    groups = {}
    for row in rows:
        if args.order and row["order_N"] not in args.order:
            continue
        groups.setdefault((row["nbar"], row["order_N"]), []).append(row)
    if not groups:
        raise ValueError("no rows to analyse")
    for (nbar, N), group in sorted(groups.items()):
        rep = peaks_from_rows(group, args.column, args.prominence)
        print(f"nbar={nbar:g} order_N={N} column={args.column}")
        print("  positions: " + (", ".join(f"{x:.6g}" for x in rep.positions) or "none"))
        if rep.inferred_kerr is not None:
            print("  spacings: " + ", ".join(f"{s:.6g}" for s in rep.spacings))
            print(f"  inferred_kerr: {rep.inferred_kerr:.6g}")
            print(f"  inferred_g: {rep.inferred_g:.6g}")
    return EXIT_OK


def _verify(args) -> int:
    from .verify import run_checks

    params = load_config(args.config).params if args.config else None
    checks = run_checks(params)
    for check in checks:
        print(check.line())
    return EXIT_OK if all(c.passed for c in checks) else EXIT_VERIFY


_HANDLERS = {"solve": _solve, "sweep": _sweep, "peaks": _peaks, "verify": _verify}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except (OSError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
