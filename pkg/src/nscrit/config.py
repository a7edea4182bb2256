"""Run configuration (sectioned key=value files) and the reproducibility manifest.

A config file fully determines a simulation; the manifest written next to
the outputs echoes every resolved value (plus the seed and the kernel
backend) so a run can be reproduced bit-for-bit, timestamps aside.
"""

from __future__ import annotations

import configparser
import json
import math
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from . import __version__, kernels
from .criterion import CriterionSpec
from .grid import GridSpec
from .solver import FileIC, InitialCondition, RandomIC, SolverConfig, TaylorGreenIC

SNAPSHOT_MODES = ("none", "final", "all")


class ConfigError(ValueError):
    """Malformed or inconsistent run configuration."""


@dataclass(frozen=True)
class RunPlan:
    """Everything a simulate invocation needs."""

    solver: SolverConfig
    specs: tuple[CriterionSpec, ...]
    c_hat: float
    snapshots: str
    seed: int | None


def _get(parser: configparser.ConfigParser, section: str, key: str, cast, default=None, required=False):
    if not parser.has_option(section, key):
        if required:
            raise ConfigError(f"missing required key [{section}] {key}")
        return default
    raw = parser.get(section, key)
    try:
        return cast(raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value for [{section}] {key}: {raw!r}") from exc


def _parse_specs(raw: str) -> tuple[CriterionSpec, ...]:
    specs = []
    for chunk in raw.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = [p.strip() for p in chunk.split(",")]
        if len(parts) != 4:
            raise ConfigError(f"criterion spec must be 'j,k,alpha,beta', got {chunk!r}")
        try:
            specs.append(CriterionSpec(int(parts[0]), int(parts[1]), float(parts[2]), float(parts[3])))
        except ValueError as exc:
            raise ConfigError(f"bad criterion spec {chunk!r}: {exc}") from exc
    return tuple(specs)


def load_config(path: Path, seed_override: int | None = None) -> RunPlan:
    """Parse a run config file into a validated plan."""
    if not Path(path).is_file():
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        parser.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc

    for section in ("grid", "solver"):
        if not parser.has_section(section):
            raise ConfigError(f"missing [{section}] section")

    if parser.has_option("grid", "n"):
        n = _get(parser, "grid", "n", int, required=True)
        dims = (n, n, n)
    else:
        dims = tuple(_get(parser, "grid", key, int, required=True) for key in ("n1", "n2", "n3"))
    length = _get(parser, "grid", "length", float, default=2.0 * math.pi)
    try:
        grid = GridSpec(*dims, length)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    seed = seed_override
    if seed is None and parser.has_option("initial", "seed"):
        seed = _get(parser, "initial", "seed", int)

    ic_type = "taylor_green"
    if parser.has_section("initial"):
        ic_type = parser.get("initial", "type", fallback="taylor_green").strip()
    ic: InitialCondition
    if ic_type == "taylor_green":
        ic = TaylorGreenIC()
    elif ic_type == "random":
        if seed is None:
            raise ConfigError("random initial condition requires a seed ([initial] seed or --seed)")
        ic = RandomIC(
            energy_spectrum_slope=_get(parser, "initial", "slope", float, default=4.0),
            k_peak=_get(parser, "initial", "k_peak", float, default=3.0),
            seed=seed,
        )
    elif ic_type == "file":
        ic = FileIC(path=_get(parser, "initial", "path", str, required=True))
    else:
        raise ConfigError(f"unknown initial condition type {ic_type!r}")

    try:
        solver = SolverConfig(
            grid=grid,
            nu=_get(parser, "solver", "nu", float, required=True),
            t_end=_get(parser, "solver", "t_end", float, required=True),
            output_interval=_get(parser, "solver", "output_interval", float, required=True),
            cfl=_get(parser, "solver", "cfl", float, default=0.5),
            dt=_get(parser, "solver", "dt", float, default=None),
            initial_condition=ic,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    specs: tuple[CriterionSpec, ...] = ()
    c_hat = 1.0
    if parser.has_section("monitor"):
        if parser.has_option("monitor", "specs"):
            try:
                specs = _parse_specs(parser.get("monitor", "specs"))
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc
        c_hat = _get(parser, "monitor", "c_hat", float, default=1.0)

    snapshots = "none"
    if parser.has_section("output"):
        snapshots = parser.get("output", "snapshots", fallback="none").strip()
    if snapshots not in SNAPSHOT_MODES:
        raise ConfigError(f"snapshots must be one of {SNAPSHOT_MODES}, got {snapshots!r}")

    return RunPlan(solver=solver, specs=specs, c_hat=c_hat, snapshots=snapshots, seed=seed)


# -- manifest -----------------------------------------------------------------

def plan_to_manifest(plan: RunPlan, config_path: str | None, out_dir: str) -> dict:
    s = plan.solver
    ic = s.initial_condition
    if isinstance(ic, TaylorGreenIC):
        ic_dict = {"type": "taylor_green"}
    elif isinstance(ic, RandomIC):
        ic_dict = {
            "type": "random",
            "slope": ic.energy_spectrum_slope,
            "k_peak": ic.k_peak,
            "seed": ic.seed,
        }
    elif isinstance(ic, FileIC):
        ic_dict = {"type": "file", "path": ic.path}
    else:
        raise ConfigError("direct field initial conditions cannot be serialized to a manifest")
    return {
        "tool": "nscrit",
        "version": __version__,
        "created_utc": datetime.now(timezone.utc).isoformat(),
        "kernel_backend": kernels.backend_name(),
        "config_path": config_path,
        "out_dir": out_dir,
        "seed": plan.seed,
        "grid": {"n1": s.grid.n1, "n2": s.grid.n2, "n3": s.grid.n3, "length": s.grid.length},
        "solver": {
            "nu": s.nu,
            "t_end": s.t_end,
            "output_interval": s.output_interval,
            "cfl": s.cfl,
            "dt": s.dt,
        },
        "initial": ic_dict,
        "monitor": {
            "specs": [[sp.j, sp.k, sp.alpha, sp.beta] for sp in plan.specs],
            "c_hat": plan.c_hat,
        },
        "output": {"snapshots": plan.snapshots},
        "status": "pending",
    }


def plan_from_manifest(manifest: dict) -> RunPlan:
    """Rebuild the exact run plan recorded in a manifest."""
    try:
        g = manifest["grid"]
        grid = GridSpec(int(g["n1"]), int(g["n2"]), int(g["n3"]), float(g["length"]))
        ic_dict = manifest["initial"]
        if ic_dict["type"] == "taylor_green":
            ic: InitialCondition = TaylorGreenIC()
        elif ic_dict["type"] == "random":
            ic = RandomIC(float(ic_dict["slope"]), float(ic_dict["k_peak"]), int(ic_dict["seed"]))
        elif ic_dict["type"] == "file":
            ic = FileIC(str(ic_dict["path"]))
        else:
            raise ConfigError(f"unknown initial condition type {ic_dict['type']!r}")
        sv = manifest["solver"]
        solver = SolverConfig(
            grid=grid,
            nu=float(sv["nu"]),
            t_end=float(sv["t_end"]),
            output_interval=float(sv["output_interval"]),
            cfl=float(sv["cfl"]),
            dt=None if sv.get("dt") is None else float(sv["dt"]),
            initial_condition=ic,
        )
        specs = tuple(
            CriterionSpec(int(j), int(k), float(a), float(b)) for j, k, a, b in manifest["monitor"]["specs"]
        )
        return RunPlan(
            solver=solver,
            specs=specs,
            c_hat=float(manifest["monitor"].get("c_hat", 1.0)),
            snapshots=manifest["output"].get("snapshots", "none"),
            seed=manifest.get("seed"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"malformed manifest: {exc}") from exc


def write_manifest(path: Path, manifest: dict) -> None:
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_manifest(path: Path) -> dict:
    if not Path(path).is_file():
        raise ConfigError(f"manifest not found: {path}")
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"cannot parse manifest {path}: {exc}") from exc
