"""Command-line entry point.

qdice --config configs/fig1-right.cfg --out results/
      [--case b] [--gamma0kT 100] [--tmax 6] [--steps 2000] [--oracle] [--quiet]

Exit codes: 0 full success, 1 configuration error, 2 partial cell failures.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .config import load_config
from .errors import ConfigError
from .model import case_from_label
from .sweep import emit_outputs, run_sweep


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qdice",
        description="Decoherence of subsystem A coupled through B to a hot Ohmic bath: "
        "diffusion coefficients, decoherence factors and decoherence times "
        "for the four harmonic/inverted compositions.",
    )
    p.add_argument("--config", required=True, help="run configuration file")
    p.add_argument("--case", help="restrict to one case label (a-d)")
    p.add_argument("--gamma0kT", type=float, help="restrict to one gamma0*kbT value")
    p.add_argument("--tmax", type=float, help="override every grid t_max")
    p.add_argument("--steps", type=int, help="override grid n_steps")
    p.add_argument("--oracle", action="store_true", help="run the master-equation cross-check")
    p.add_argument("--out", help="output directory (default: config out_dir)")
    p.add_argument("--quiet", action="store_true", help="suppress per-cell report lines")
    return p


def _apply_overrides(run, args):
    if args.case is not None:
        case_from_label(args.case)
        run = replace(run, cases=[args.case.lower()])
    if args.gamma0kT is not None:
        if args.gamma0kT in run.temperatures:
            idx = run.temperatures.index(args.gamma0kT)
            run = replace(run, temperatures=[args.gamma0kT], t_max=[run.t_max[idx]])
        else:
            run = replace(run, temperatures=[args.gamma0kT], t_max=[run.t_max[0]])
    if args.tmax is not None:
        run = replace(run, t_max=[args.tmax] * len(run.temperatures))
    if args.steps is not None:
        if args.steps < 2:
            raise ConfigError(f"--steps must be >= 2, got {args.steps}")
        run = replace(run, n_steps=args.steps)
    if args.oracle:
        run = replace(run, oracle=True)
    if args.out is not None:
        run = replace(run, out_dir=args.out)
    return run


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        run = _apply_overrides(load_config(args.config), args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1

    report = run_sweep(run)
    try:
        files = emit_outputs(report, run.out_dir)
    except OSError as exc:
        print(f"cannot write outputs to {run.out_dir}: {exc}", file=sys.stderr)
        return 1

    if not args.quiet:
        for cell in report.cells:
            if cell.error is not None:
                print(f"cell {cell.case_label} g0kT={cell.g0kt:g}: ERROR {cell.error}")
            else:
                thr = "never" if cell.t_threshold is None else f"{cell.t_threshold:.4f}"
                frm = "-" if cell.t_formula is None else f"{cell.t_formula:.4f}"
                line = (
                    f"cell {cell.case_label} g0kT={cell.g0kt:g}: "
                    f"t_threshold={thr} t_formula[{cell.formula_route}]={frm}"
                )
                if cell.oracle_agreement is not None:
                    line += f" oracle_dev={cell.oracle_agreement:.3e}"
                print(line)
        print(f"wrote {len(files)} files + manifest.json to {run.out_dir}")

    return 2 if report.failures else 0


if __name__ == "__main__":
    sys.exit(main())
