"""Command-line interface.

Subcommands: improve (one gate, prints the error report), table
ideal|bandwidth, sweep --param, jitter --powers, spectrum --gate --out.
"""

from __future__ import annotations

import argparse
import sys

from . import experiments
from .config import apply_overrides, default_config, load_config


def _base_config(args):
    cfg = load_config(args.config) if args.config else default_config()
    return apply_overrides(
        cfg,
        gate=[args.gate] if getattr(args, "gate", None) else None,
        steps=getattr(args, "steps", None),
        seed=getattr(args, "seed", None),
        realizations=getattr(args, "realizations", None),
        out=getattr(args, "out", None),
    )


def _add_common(p):
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--gate", help="restrict to one gate")
    p.add_argument("--steps", type=int, help="grid steps for both systems")
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--out", help="output CSV path")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="nocgf",
        description="Refine rapid-passage quantum gates with neighboring "
                    "optimal control.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("improve", help="improve one gate and print its report")
    _add_common(p)

    p = sub.add_parser("table", help="emit a results table as CSV")
    p.add_argument("kind", choices=["ideal", "bandwidth"])
    _add_common(p)

    p = sub.add_parser("sweep", help="finite-precision sensitivity sweep")
    p.add_argument("--param", required=True,
                   help="sweep parameter name (lam, eta4, d1, d4, c4)")
    _add_common(p)

    p = sub.add_parser("jitter", help="phase-jitter ensemble sweep")
    p.add_argument("--powers", required=True,
                   help="comma-separated mean noise powers")
    p.add_argument("--realizations", type=int, help="trials per power")
    _add_common(p)

    p = sub.add_parser("spectrum", help="export a control-modification spectrum")
    _add_common(p)
    p.add_argument("--component", default="x", choices=["x", "y", "z"])

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = _base_config(args)

    if args.command == "improve":
        if len(cfg.gates) != 1:
            print("improve requires a single --gate", file=sys.stderr)
            return 2
        name = cfg.gates[0]
        res = experiments.improve_for(cfg, name)
        nom, imp = res.nominal_report, res.improved_report
        print(f"gate: {name} (strategy {res.strategy})")
        print(f"  nominal : TrP = {nom.trace_p:.6e}  d* = {nom.d_star:.6e}  "
              f"fidelity = {nom.fidelity:.6f}")
        print(f"  improved: TrP = {imp.trace_p:.6e}  d* = {imp.d_star:.6e}  "
              f"fidelity = {imp.fidelity:.6f}")
        return 0

    if args.command == "table":
        if args.kind == "ideal":
            rows = experiments.run_ideal_table(cfg)
            text = experiments.write_csv(cfg.out, experiments.IDEAL_HEADER, rows,
                                         "table ideal")
        else:
            rows = experiments.run_bandwidth_table(cfg)
            text = experiments.write_csv(cfg.out, experiments.BANDWIDTH_HEADER,
                                         rows, "table bandwidth")
        if not cfg.out:
            print(text, end="")
        return 0

    if args.command == "sweep":
        gates = cfg.gates if args.gate is None else [args.gate.lower()]
        all_rows = []
        for g in gates:
            try:
                all_rows.extend(experiments.run_sweep(cfg, args.param, g))
            except ValueError:
                continue  # parameter not defined for this gate
        if not all_rows:
            print(f"parameter {args.param!r} applies to none of the gates",
                  file=sys.stderr)
            return 2
        text = experiments.write_csv(cfg.out, experiments.SWEEP_HEADER, all_rows,
                                     f"sweep {args.param}")
        if not cfg.out:
            print(text, end="")
        return 0

    if args.command == "jitter":
        powers = [float(tok) for tok in args.powers.split(",") if tok.strip()]
        rows = experiments.run_jitter_sweep(cfg, powers)
        text = experiments.write_csv(cfg.out, experiments.JITTER_HEADER, rows,
                                     "jitter")
        if not cfg.out:
            print(text, end="")
        return 0

    if args.command == "spectrum":
        if len(cfg.gates) != 1:
            print("spectrum requires a single --gate", file=sys.stderr)
            return 2
        if not cfg.out:
            print("spectrum requires --out", file=sys.stderr)
            return 2
        experiments.run_spectrum(cfg, cfg.gates[0], cfg.out, args.component)
        return 0

    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    raise SystemExit(main())
