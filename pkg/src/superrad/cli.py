"""Command-line entry point: ``superrad {simulate,sweep,figure,calibrate}``."""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .analysis import FitError
from .config import parse_config, parse_sweep_spec
from .model import ConfigError, make_default_config
from .solver import NumericalBlowupError, simulate
from .sweep import PRESETS, SweepError, calibrate, run_figure, run_sweep

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4


def _load(args):
    return parse_config(args.config) if args.config else make_default_config()


def cmd_simulate(args) -> int:
    traj = simulate(_load(args), sample_every=args.sample_every)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "trajectory.csv"
    traj.to_csv(path)
    n00, n11, nm = traj.populations[-1]
    print(f"wrote {path}")
    print(f"tau_end = {traj.taus[-1]:.6g}  N00 = {n00:.6g}  N11 = {n11:.6g}  Nm1m1 = {nm:.6g}")
    print(f"max relative drift = {traj.max_relative_drift():.3g}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    if not args.config:
        raise ConfigError("sweep needs --config with sweep.axis and sweep.values")
    spec = parse_sweep_spec(args.config, mirror_family=args.mirror_family or None)
    if args.parallelism:
        spec = replace(spec, parallelism=args.parallelism)
    result = run_sweep(spec)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    result.to_csv(out / "sweep.csv")
    (out / "sweep_fit.txt").write_text(result.fit_report(), encoding="utf-8")
    flagged = sum(r.flagged for r in result.rows)
    print(f"wrote {out / 'sweep.csv'} ({len(result.rows)} rows, {flagged} flagged)")
    for key, fit in result.fits.items():
        label = "phi0" if key is None else f"{spec.axis} = {key:g}"
        print(f"{label}: max at {fit.maximizer:.4f}, min at {fit.minimizer:.4f}, R^2 = {fit.r_squared:.4f}")
    return EXIT_OK


def cmd_figure(args) -> int:
    base = parse_config(args.config) if args.config else None
    bundle = run_figure(
        args.preset, args.out, base=base, parallelism=args.parallelism or 1, mirror_family=args.mirror_family
    )
    for kind, path in bundle.paths.items():
        print(f"{kind}: {path}")
    return EXIT_OK


def cmd_calibrate(args) -> int:
    cal = calibrate(target=args.target, base=_load(args))
    text = (
        f"chi0 = {cal.chi0!r}\n"
        f"target = {cal.target!r}\n"
        f"backward = {cal.backward!r}\n"
        f"depletion = {cal.depletion!r}\n"
    )
    print(text, end="")
    if cal.depletion >= 0.2:
        print("warning: condensate depletion >= 20%, outside the weak-pump regime", file=sys.stderr)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "calibration.txt").write_text(text, encoding="utf-8")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="key = value configuration file")
    common.add_argument("--out", metavar="DIR", default=".", help="output directory (default: .)")
    common.add_argument("--parallelism", metavar="N", type=int, default=None, help="sweep worker count")
    common.add_argument("--sample-every", metavar="K", type=int, default=10, help="trajectory sampling stride")
    common.add_argument(
        "--mirror-family", action="store_true", help="double the backward fraction for the mirror diagonal family"
    )

    parser = argparse.ArgumentParser(prog="superrad", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("simulate", parents=[common], help="single run -> trajectory.csv").set_defaults(func=cmd_simulate)
    sub.add_parser("sweep", parents=[common], help="sweep config -> sweep.csv + fit report").set_defaults(
        func=cmd_sweep
    )
    fig = sub.add_parser("figure", parents=[common], help="run a figure preset")
    fig.add_argument("preset", choices=PRESETS)
    fig.set_defaults(func=cmd_figure)
    cal = sub.add_parser("calibrate", parents=[common], help="search the reference chi0")
    cal.add_argument("--target", type=float, default=1e-2, help="backward fraction at phi0 = pi/2")
    cal.set_defaults(func=cmd_calibrate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalBlowupError, SweepError, FitError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
