"""Command-line front end.

Subcommands: fr, snapshot, recover, sweep {fr,recovery}, budget,
minimal-budget.  Config files are flat key=value; flags given on the command
line win over the file.  Exit codes: 0 success, 2 bad configuration or
arguments, 3 when more than half of the recovery trials did not converge.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import harness, io
from .bounds import sample_budget
from .errors import ConfigError, FrsampError
from .fields import FAMILIES, FamilySpec, build_family, discretize
from .gridfft import fourier_ratio
from .propagators import PdeKind, snapshot_grid
from .recovery import SolverConfig, recover_l1


def _family_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--family", choices=FAMILIES, default="random-trig")
    parser.add_argument("--d", type=int, default=2, help="dimension (1, 2, or 3)")
    parser.add_argument("--K", type=int, default=None, help="band radius")
    parser.add_argument("--alpha", type=float, default=None, help="rough-spectrum decay exponent")
    parser.add_argument("--width", type=float, default=None, help="bump width")


def _global_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", default=None, help="key=value config file")
    parser.add_argument("--out-dir", default=".", help="directory for output files")
    parser.add_argument("--seed", type=int, default=None, help="seed override")
    parser.add_argument("--workers", type=int, default=None, help="parallel trial workers")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frsamp",
        description="Fourier-ratio experiments: snapshots, sparse recovery, budgets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fr", help="Fourier ratio of a stored or freshly drawn field")
    _global_flags(p)
    _family_flags(p)
    p.add_argument("--input", default=None, help="SPFD field file (skips the family draw)")
    p.add_argument("--N", type=int, default=64, help="grid side")

    p = sub.add_parser("snapshot", help="evolve initial data and store the grid snapshot")
    _global_flags(p)
    _family_flags(p)
    p.add_argument("--input", default=None, help="SPTP coefficient file (skips the family draw)")
    p.add_argument("--pde", choices=("heat", "wave"), default="heat")
    p.add_argument("--t", type=float, required=True, help="evolution time")
    p.add_argument("--N", type=int, default=64, help="grid side")
    p.add_argument("--allow-any-dim", action="store_true",
                   help="permit the wave evolution outside dimension 3")
    p.add_argument("--out", default="snapshot.spfd", help="output field file")

    p = sub.add_parser("recover", help="l1-minimizing field from stored samples")
    _global_flags(p)
    p.add_argument("--samples", required=True, help="samples CSV")
    p.add_argument("--N", type=int, required=True, help="grid side")
    p.add_argument("--tau", type=float, default=None, help="noise ball radius override")
    p.add_argument("--max-iters", type=int, default=20000)
    p.add_argument("--out", default="estimate.spfd", help="output field file")

    p = sub.add_parser("sweep", help="run an experiment sweep and emit CSV/SVG")
    _global_flags(p)
    p.add_argument("what", choices=("fr", "recovery"))

    p = sub.add_parser("budget", help="sampling budget rule and sensor window")
    _global_flags(p)
    p.add_argument("--r", type=float, default=None, help="Fourier ratio (one-shot mode)")
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--D", type=float, default=None, help="ambient dimension N^d")
    p.add_argument("--C", type=float, default=None)
    p.add_argument("--m0", type=float, default=None, help="initial sensor count")
    p.add_argument("--lambda", dest="lam", type=float, default=None, help="sensor decay rate")

    p = sub.add_parser("minimal-budget", help="smallest M reaching the target success rate")
    _global_flags(p)
    p.add_argument("--target", type=float, default=None, help="target success probability")

    return parser


def _load_config(args, overrides: dict | None = None) -> harness.ExperimentConfig:
    mapping = harness.parse_config_file(args.config) if args.config else {}
    if args.seed is not None:
        mapping["master_seed"] = str(args.seed)
    if args.workers is not None:
        mapping["workers"] = str(args.workers)
    for key, value in (overrides or {}).items():
        if value is not None:
            mapping[key] = str(value)
    return harness.build_config(mapping)


def _family_from_flags(args) -> FamilySpec:
    extras = {}
    if args.width is not None:
        extras["width"] = args.width
    return FamilySpec(
        family=args.family,
        d=args.d,
        K=args.K,
        alpha=args.alpha,
        seed=args.seed if args.seed is not None else 0,
        extras=extras,
    )


def _out_path(args, name: str) -> str:
    os.makedirs(args.out_dir, exist_ok=True)
    return os.path.join(args.out_dir, name)


def _cmd_fr(args) -> int:
    if args.input is not None:
        field = io.load_field(args.input)
    else:
        field = discretize(build_family(_family_from_flags(args)), args.N)
    print(f"FR={fourier_ratio(field):.12g}")
    return 0


def _cmd_snapshot(args) -> int:
    if args.input is not None:
        poly = io.load_poly(args.input)
    else:
        poly = build_family(_family_from_flags(args))
    pde = PdeKind(args.pde, args.t)
    snap = snapshot_grid(poly, pde, args.N, allow_any_dim=args.allow_any_dim)
    io.save_field(snap, _out_path(args, args.out))
    print(f"FR_g={fourier_ratio(discretize(poly, args.N)):.12g}")
    print(f"FR_gt={fourier_ratio(snap):.12g}")
    print(f"out={os.path.join(args.out_dir, args.out)}")
    return 0


def _cmd_recover(args) -> int:
    samples = io.load_samples(args.samples, N=args.N, tau=args.tau if args.tau is not None else 0.0)
    result = recover_l1(samples, SolverConfig(max_iters=args.max_iters))
    io.save_field(result.estimate, _out_path(args, args.out))
    print(f"converged={'true' if result.converged else 'false'}")
    print(f"iterations={result.iterations}")
    print(f"objective={result.objective:.12g}")
    print(f"feasibility_residual={result.feasibility_residual:.12g}")
    print(f"out={os.path.join(args.out_dir, args.out)}")
    return 0 if result.converged else 3


def _cmd_sweep(args) -> int:
    config = _load_config(args)
    if args.what == "fr":
        table = harness.run_fr_sweep(config)
        harness.emit_csv(table, _out_path(args, "fr_sweep.csv"))
        harness.emit_svg(table, "fr_vs_t", _out_path(args, "fr_vs_t.svg"))
        harness.emit_svg(table, "fr_vs_N", _out_path(args, "fr_vs_N.svg"))
        print(f"rows={len(table.rows)}")
        print(f"out={os.path.join(args.out_dir, 'fr_sweep.csv')}")
        return 0
    table = harness.run_recovery_sweep(config)
    harness.emit_csv(table, _out_path(args, "recovery_sweep.csv"))
    harness.emit_svg(table, "success_vs_M", _out_path(args, "success_vs_M.svg"))
    harness.emit_svg(table, "err_vs_M", _out_path(args, "err_vs_M.svg"))
    total = sum(row[table.columns.index("trials")] for row in table.rows)
    bad = sum(row[table.columns.index("not_converged")] for row in table.rows)
    print(f"rows={len(table.rows)}")
    print(f"not_converged={bad}/{total}")
    print(f"out={os.path.join(args.out_dir, 'recovery_sweep.csv')}")
    return 3 if 2 * bad > total else 0


def _cmd_budget(args) -> int:
    if args.r is not None:
        if args.eps is None or args.D is None:
            raise ConfigError("one-shot budget mode needs --r, --eps, and --D")
        m = sample_budget(args.r, args.eps, args.D, C=args.C if args.C is not None else 1.0)
        print(f"M={m}")
        return 0
    overrides = {"eps": args.eps, "C": args.C, "m0": args.m0, "lambda": args.lam}
    config = _load_config(args, overrides)
    curves, table = harness.run_budget_study(config)
    harness.emit_csv(table, _out_path(args, "budget.csv"))
    for n in sorted(curves):
        window = curves[n].window
        if window is None:
            print(f"N={n} window=none")
        else:
            print(f"N={n} window=[{window[0]:.12g},{window[1]:.12g}]")
    print(f"out={os.path.join(args.out_dir, 'budget.csv')}")
    return 0


def _cmd_minimal_budget(args) -> int:
    config = _load_config(args)
    table = harness.minimal_budget(config, target_prob=args.target)
    harness.emit_csv(table, _out_path(args, "minimal_budget.csv"))
    for row in table.rows:
        print(f"N={row[0]} t={row[1]:.12g} M_star={row[2]}")
    print(f"out={os.path.join(args.out_dir, 'minimal_budget.csv')}")
    return 0


_COMMANDS = {
    "fr": _cmd_fr,
    "snapshot": _cmd_snapshot,
    "recover": _cmd_recover,
    "sweep": _cmd_sweep,
    "budget": _cmd_budget,
    "minimal-budget": _cmd_minimal_budget,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except FrsampError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
