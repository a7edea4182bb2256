"""Command-line entry point.

Subcommands:
  simulate    run a configured simulation, write series.csv + manifest.json
  lab         seeded inequality sweeps, write lab.csv
  admissible  exponent-pair verdict for one Jacobian entry
  audit       re-run the energy audit on an existing series CSV

Exit codes: 0 ok, 1 config error, 2 numerical breakdown / failed audit,
3 exponent pair not admissible.
"""

from __future__ import annotations

import argparse
import csv
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .config import (
    ConfigError,
    load_config,
    plan_from_manifest,
    plan_to_manifest,
    read_manifest,
    write_manifest,
)
from .criterion import audit_series, gronwall_exponent, is_admissible, read_series_csv, write_series_csv
from .grid import GridSpec
from .inequalities import KINDS, TRILINEAR_KINDS, iter_cases
from .snapshots import write_snapshot
from .solver import run

OK, CONFIG_ERROR, BREAKDOWN, NOT_ADMISSIBLE = 0, 1, 2, 3


def _fmt(x: float) -> str:
    return format(x, ".17g")


def cmd_simulate(args) -> int:
    out_dir = Path(args.out_dir)
    try:
        if args.manifest:
            plan = plan_from_manifest(read_manifest(Path(args.manifest)))
            config_path = None
        else:
            if not args.config:
                raise ConfigError("simulate requires --config or --manifest")
            plan = load_config(Path(args.config), seed_override=args.seed)
            config_path = str(args.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CONFIG_ERROR

    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = plan_to_manifest(plan, config_path, str(out_dir))

    snapshot_index = 0

    def on_output(state) -> None:
        nonlocal snapshot_index
        if plan.snapshots == "all":
            from .fields import inverse_vector

            write_snapshot(out_dir / f"fields_{snapshot_index:06d}.nscf", inverse_vector(state.u_hat), state.t)
            snapshot_index += 1

    try:
        result = run(plan.solver, plan.specs, c_hat=plan.c_hat, on_output=on_output)
    except (ValueError, OSError) as exc:
        # initial-condition construction failures (bad snapshot, grid mismatch)
        print(f"error: {exc}", file=sys.stderr)
        return CONFIG_ERROR
    write_series_csv(out_dir / "series.csv", result.records, plan.specs)
    if plan.snapshots == "final" and not result.breakdown:
        from .fields import inverse_vector

        write_snapshot(out_dir / "fields_final.nscf", inverse_vector(result.state.u_hat), result.state.t)

    manifest["status"] = "breakdown" if result.breakdown else "ok"
    manifest["breakdown_time"] = result.breakdown_time
    manifest["series_csv"] = "series.csv"
    write_manifest(out_dir / "manifest.json", manifest)

    if result.breakdown:
        print(f"error: numerical breakdown at t={result.breakdown_time:.6g}; partial series written", file=sys.stderr)
        return BREAKDOWN
    print(f"wrote {out_dir / 'series.csv'} ({len(result.records)} records)")
    return OK


def cmd_lab(args) -> int:
    kinds = args.kind or list(KINDS)
    if "all" in kinds:
        kinds = list(KINDS)
    default_r = {
        "trilinear_x1": (2.25, 2.5, 2.75),
        "trilinear_x3": (2.25, 2.5, 2.75),
        "ladyzhenskaya": (2.0, 3.0, 4.0, 6.0),
    }
    try:
        grid = GridSpec.cubic(args.n)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CONFIG_ERROR

    for kind in kinds:
        r_list = args.r or default_r[kind]
        for r in r_list:
            if kind in TRILINEAR_KINDS and not (2.0 < r < 3.0):
                print(f"error: {kind} requires r in (2, 3), got {r}", file=sys.stderr)
                return CONFIG_ERROR
            if kind == "ladyzhenskaya" and not (2.0 <= r <= 6.0):
                print(f"error: ladyzhenskaya requires r in [2, 6], got {r}", file=sys.stderr)
                return CONFIG_ERROR

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    out_path = out_dir / "lab.csv"
    n_rows = 0
    try:
        with open(out_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["kind", "r", "seed", "lhs", "rhs_factor", "ratio"])
            for kind in kinds:
                r_list = args.r or default_r[kind]
                for case in iter_cases(kind, r_list, grid, args.samples, args.seed, max_mode=args.max_mode):
                    rep = case.report
                    writer.writerow(
                        [case.kind, _fmt(case.r), case.seed, _fmt(rep.lhs), _fmt(rep.rhs_factor), _fmt(rep.ratio)]
                    )
                    n_rows += 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CONFIG_ERROR
    print(f"wrote {out_path} ({n_rows} cases)")
    return OK


def cmd_admissible(args) -> int:
    try:
        alpha = Fraction(args.alpha)
        beta = Fraction(args.beta)
        entry = args.entry.strip()
        if len(entry) != 2 or entry[0] not in "123" or entry[1] not in "123":
            raise ValueError(f"entry must be two digits jk in 1..3, got {entry!r}")
        j, k = int(entry[0]), int(entry[1])
        kind = "diagonal" if j == k else "off_diagonal"
        verdict = is_admissible(alpha, beta, kind)
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CONFIG_ERROR
    print(
        f"entry={j}{k} kind={verdict.kind} alpha={verdict.alpha} beta={verdict.beta} "
        f"weak={'yes' if verdict.satisfied_weak else 'no'} "
        f"strict={'yes' if verdict.satisfied_strict else 'no'} "
        f"beta_min={verdict.beta_min} gronwall_exponent={gronwall_exponent(alpha, kind)}"
    )
    return OK if verdict.satisfied_weak else NOT_ADMISSIBLE


def cmd_audit(args) -> int:
    path = Path(args.csv)
    if not path.is_file():
        print(f"error: CSV not found: {path}", file=sys.stderr)
        return CONFIG_ERROR
    nu = args.nu
    if nu is None:
        manifest_path = path.parent / "manifest.json"
        try:
            nu = float(read_manifest(manifest_path)["solver"]["nu"])
        except (ConfigError, KeyError, TypeError, ValueError):
            print("error: supply --nu or keep manifest.json next to the CSV", file=sys.stderr)
            return CONFIG_ERROR
    cols = read_series_csv(path)
    try:
        report = audit_series(
            cols["t"],
            cols["energy"],
            cols["grad_l2"],
            cols["dissipation_integral"],
            nu,
            residual_tol=args.residual_tol,
        )
    except (KeyError, ValueError) as exc:
        print(f"error: malformed series CSV: {exc}", file=sys.stderr)
        return CONFIG_ERROR
    print(
        f"max_abs_residual={report.max_abs_residual:.6g} "
        f"residual_violations={len(report.residual_violations)} "
        f"k1_violations={len(report.k1_violations)} "
        f"energy_increases={len(report.energy_increases)} "
        f"passed={'yes' if report.passed else 'no'}"
    )
    return OK if report.passed else BREAKDOWN


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nsc", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"nscrit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run a configured simulation")
    p.add_argument("--config", help="run config file (sectioned key=value)")
    p.add_argument("--manifest", help="reproduce a run from an existing manifest.json")
    p.add_argument("--out-dir", default=".", help="output directory")
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("lab", help="seeded inequality-ratio sweeps")
    p.add_argument("--out-dir", default=".", help="output directory")
    p.add_argument("--kind", action="append", choices=list(KINDS) + ["all"], help="inequality kind (repeatable)")
    p.add_argument("--r", action="append", type=float, help="exponent r (repeatable)")
    p.add_argument("--samples", type=int, default=20, help="cases per (kind, r)")
    p.add_argument("--seed", type=int, default=0, help="sweep seed")
    p.add_argument("--n", type=int, default=32, help="cubic grid resolution")
    p.add_argument("--max-mode", type=int, default=None, help="band limit of the test fields")
    p.set_defaults(func=cmd_lab)

    p = sub.add_parser("admissible", help="exponent-pair verdict for one entry")
    p.add_argument("--alpha", required=True, help="Lebesgue exponent (rational, e.g. 9 or 25/9)")
    p.add_argument("--beta", required=True, help="time exponent (rational)")
    p.add_argument("--entry", required=True, help="Jacobian entry jk, e.g. 31")
    p.set_defaults(func=cmd_admissible)

    p = sub.add_parser("audit", help="energy audit of an existing series CSV")
    p.add_argument("--csv", required=True, help="path to series.csv")
    p.add_argument("--nu", type=float, default=None, help="viscosity (default: from sibling manifest.json)")
    p.add_argument("--residual-tol", type=float, default=1e-5, help="budget residual tolerance")
    p.set_defaults(func=cmd_audit)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
