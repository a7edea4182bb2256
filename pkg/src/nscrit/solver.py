"""Pseudo-spectral time integration of the incompressible momentum equation
on the periodic box: dealiased convective nonlinearity, mode-wise solenoidal
projection (the pressure gradient never materializes), exact integrating
factor for the viscous term, explicit RK4 for the rest.

The flow is unforced and decaying; the state is kept divergence-free,
dealiased and zero-mean at every accepted step. The viscous dissipation
integral is accumulated with the RK4 stage quadrature, so the discrete
energy budget closes at the integrator's own order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
import scipy.fft

from . import kernels
from .criterion import CriterionAccumulator, CriterionSpec, MonitorRecord
from .fields import (
    SpectralVectorField,
    VectorField,
    dealias,
    fft_workers,
    forward_vector,
    inverse_vector,
    leray_project,
    random_solenoidal,
    taylor_green,
)
from .grid import GridSpec, wavenumbers


class NumericalBreakdown(RuntimeError):
    """Non-finite state detected (suspected instability or blow-up)."""

    def __init__(self, t: float | None, step_count: int):
        where = "in right-hand-side evaluation" if t is None else f"at t={t:.6g} after {step_count} steps"
        super().__init__(f"non-finite velocity state {where}")
        self.t = t
        self.step_count = step_count


# -- initial conditions ------------------------------------------------------

@dataclass(frozen=True)
class TaylorGreenIC:
    def build(self, grid: GridSpec) -> VectorField:
        return taylor_green(grid)


@dataclass(frozen=True)
class RandomIC:
    energy_spectrum_slope: float
    k_peak: float
    seed: int

    def build(self, grid: GridSpec) -> VectorField:
        return random_solenoidal(grid, self.energy_spectrum_slope, self.k_peak, self.seed)


@dataclass(frozen=True)
class FileIC:
    path: str

    def build(self, grid: GridSpec) -> VectorField:
        from .snapshots import read_snapshot

        field, _ = read_snapshot(Path(self.path))
        if field.grid != grid:
            raise ValueError(f"snapshot grid {field.grid} does not match configured grid {grid}")
        return field


@dataclass(frozen=True)
class FieldIC:
    """Directly supplied velocity field (programmatic use)."""

    field: VectorField

    def build(self, grid: GridSpec) -> VectorField:
        if self.field.grid != grid:
            raise ValueError("supplied field grid does not match configured grid")
        return self.field


InitialCondition = TaylorGreenIC | RandomIC | FileIC | FieldIC


@dataclass(frozen=True)
class SolverConfig:
    grid: GridSpec
    nu: float
    t_end: float
    output_interval: float
    cfl: float = 0.5
    dt: float | None = None  # fixed step instead of CFL-adaptive
    initial_condition: InitialCondition = TaylorGreenIC()

    def __post_init__(self):
        if not (self.nu > 0.0 and math.isfinite(self.nu)):
            raise ValueError(f"viscosity must be positive, got {self.nu}")
        if self.t_end < 0.0:
            raise ValueError(f"t_end must be nonnegative, got {self.t_end}")
        if not (0.0 < self.cfl <= 1.0):
            raise ValueError(f"cfl must lie in (0, 1], got {self.cfl}")
        if not (self.output_interval > 0.0):
            raise ValueError(f"output_interval must be positive, got {self.output_interval}")
        if self.dt is not None and not (self.dt > 0.0):
            raise ValueError(f"fixed dt must be positive, got {self.dt}")


@dataclass
class SolverState:
    config: SolverConfig
    t: float
    u_hat: SpectralVectorField
    step_count: int
    energy0: float
    dissipation_integral: float  # 2*nu * int ||grad u||_2^2 ds, RK4 stage quadrature


@dataclass(frozen=True)
class EnergyBudget:
    t: float
    energy: float
    dissipation_integral: float
    residual: float


# -- spectral reductions ------------------------------------------------------

def _energy_raw(grid: GridSpec, coeffs: np.ndarray) -> float:
    """||u||_2^2 via the Parseval sum."""
    kk = wavenumbers(grid)
    mag = coeffs.real ** 2 + coeffs.imag ** 2
    return float(grid.volume * np.sum(mag * kk.weights))


def _grad_l2sq_raw(grid: GridSpec, coeffs: np.ndarray) -> float:
    """||grad u||_2^2 via the Parseval sum."""
    kk = wavenumbers(grid)
    mag = coeffs.real ** 2 + coeffs.imag ** 2
    return float(grid.volume * np.sum(mag * (kk.weights * kk.ksq_grad)))


def energy_budget(state: SolverState) -> EnergyBudget:
    e = _energy_raw(state.config.grid, state.u_hat.coeffs)
    return EnergyBudget(state.t, e, state.dissipation_integral, e + state.dissipation_integral - state.energy0)


# -- right-hand side ----------------------------------------------------------

def _nonlinear_raw(grid: GridSpec, coeffs: np.ndarray) -> np.ndarray:
    """-P[(u.grad)u], dealiased, zero mode zeroed; raw coefficient arrays."""
    kk = wavenumbers(grid)
    workers = fft_workers()
    n = grid.npoints
    shape = grid.shape

    u = np.empty((3,) + shape)
    for i in range(3):
        u[i] = scipy.fft.irfftn(coeffs[i] * n, s=shape, workers=workers)

    ds = (kk.d1, kk.d2, kk.d3)
    g = np.empty((3, 3) + shape)
    for i in range(3):
        for j in range(3):
            g[i, j] = scipy.fft.irfftn(1j * ds[j] * coeffs[i] * n, s=shape, workers=workers)

    w = np.empty((3,) + shape)
    kernels.advect(
        u[0].ravel(), u[1].ravel(), u[2].ravel(),
        g[0, 0].ravel(), g[0, 1].ravel(), g[0, 2].ravel(),
        g[1, 0].ravel(), g[1, 1].ravel(), g[1, 2].ravel(),
        g[2, 0].ravel(), g[2, 1].ravel(), g[2, 2].ravel(),
        w[0].ravel(), w[1].ravel(), w[2].ravel(),
    )
    w *= -1.0

    out = np.empty_like(coeffs)
    for i in range(3):
        out[i] = scipy.fft.rfftn(w[i], workers=workers) / n

    dense = kk.dense()
    kernels.project_and_mask(
        out[0].ravel(), out[1].ravel(), out[2].ravel(),
        dense["d1"], dense["d2"], dense["d3"], dense["inv_ksq"], dense["mask"],
    )
    out[:, 0, 0, 0] = 0.0
    return out


def nonlinear_term(u_hat: SpectralVectorField) -> SpectralVectorField:
    """-P[(u.grad)u] computed pseudo-spectrally with 2/3 dealiasing."""
    out = _nonlinear_raw(u_hat.grid, u_hat.coeffs)
    if not np.isfinite(out).all():
        raise NumericalBreakdown(None, 0)
    return SpectralVectorField(u_hat.grid, out)


# -- stepping -----------------------------------------------------------------

def cfl_dt(state: SolverState, cfl: float | None = None, dt_max: float = math.inf) -> float:
    """Advective CFL step: cfl * min(dx) / max |u|, capped at dt_max."""
    if cfl is None:
        cfl = state.config.cfl
    grid = state.config.grid
    workers = fft_workers()
    umax = 0.0
    for i in range(3):
        phys = scipy.fft.irfftn(state.u_hat.coeffs[i] * grid.npoints, s=grid.shape, workers=workers)
        umax = max(umax, float(np.max(np.abs(phys))))
    return min(dt_max, cfl * min(grid.dx) / max(umax, 1e-12))


def step(state: SolverState, dt: float) -> SolverState:
    """One integrating-factor RK4 step (viscous factor exact)."""
    if not dt > 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    grid = state.config.grid
    nu = state.config.nu
    kk = wavenumbers(grid)
    half = np.exp(-nu * kk.ksq * (0.5 * dt))
    full = half * half

    c0 = state.u_hat.coeffs
    with np.errstate(over="ignore", invalid="ignore"):
        n1 = _nonlinear_raw(grid, c0)
        s2 = half * (c0 + (0.5 * dt) * n1)
        n2 = _nonlinear_raw(grid, s2)
        s3 = half * c0 + (0.5 * dt) * n2
        n3 = _nonlinear_raw(grid, s3)
        s4 = full * c0 + dt * (half * n3)
        n4 = _nonlinear_raw(grid, s4)
        new = full * c0 + (dt / 6.0) * (full * n1 + 2.0 * (half * (n2 + n3)) + n4)

        diss = state.dissipation_integral + (dt / 6.0) * (
            2.0 * nu * _grad_l2sq_raw(grid, c0)
            + 4.0 * nu * _grad_l2sq_raw(grid, s2)
            + 4.0 * nu * _grad_l2sq_raw(grid, s3)
            + 2.0 * nu * _grad_l2sq_raw(grid, s4)
        )

    t_new = state.t + dt
    if not (np.isfinite(new).all() and math.isfinite(diss)):
        raise NumericalBreakdown(t_new, state.step_count + 1)
    return SolverState(
        config=state.config,
        t=t_new,
        u_hat=SpectralVectorField(grid, new),
        step_count=state.step_count + 1,
        energy0=state.energy0,
        dissipation_integral=diss,
    )


def initial_state(config: SolverConfig) -> SolverState:
    """Build, project, dealias and zero-mean the initial velocity."""
    u0 = config.initial_condition.build(config.grid)
    spec = dealias(leray_project(forward_vector(u0)))
    spec.coeffs[:, 0, 0, 0] = 0.0
    return SolverState(
        config=config,
        t=0.0,
        u_hat=spec,
        step_count=0,
        energy0=_energy_raw(config.grid, spec.coeffs),
        dissipation_integral=0.0,
    )


@dataclass
class RunResult:
    records: list[MonitorRecord]
    state: SolverState
    breakdown: bool = False
    breakdown_time: float | None = None


def run(
    config: SolverConfig,
    specs: Sequence[CriterionSpec] = (),
    c_hat: float = 1.0,
    on_output: Callable[[SolverState], None] | None = None,
) -> RunResult:
    """Integrate to t_end, emitting one monitor record per output time.

    Output times are snapped to the exact k * output_interval grid by
    shortening the final substep; a numerical breakdown aborts with the
    partial record series flagged.
    """
    state = initial_state(config)
    acc = CriterionAccumulator(specs, c_hat=c_hat)

    def emit(st: SolverState) -> MonitorRecord:
        with np.errstate(over="ignore", invalid="ignore"):
            budget = energy_budget(st)
            rec = acc.record(st.t, inverse_vector(st.u_hat), budget.energy, budget.dissipation_integral)
        if not (math.isfinite(rec.energy) and math.isfinite(rec.grad_l2)):
            raise NumericalBreakdown(st.t, st.step_count)
        return rec

    records = [emit(state)]
    if on_output is not None:
        on_output(state)

    out_times = []
    k = 1
    while k * config.output_interval < config.t_end - 1e-12 * max(1.0, config.t_end):
        out_times.append(k * config.output_interval)
        k += 1
    if config.t_end > 0.0:
        out_times.append(config.t_end)

    for t_out in out_times:
        try:
            while state.t < t_out - 1e-12 * max(1.0, t_out):
                dt = config.dt if config.dt is not None else cfl_dt(state)
                dt = min(dt, t_out - state.t)
                state = step(state, dt)
            state.t = t_out
            records.append(emit(state))
        except NumericalBreakdown as exc:
            return RunResult(records, state, breakdown=True, breakdown_time=exc.t)
        except ValueError:
            # diagnostics on an overflowing (but not yet non-finite) state
            return RunResult(records, state, breakdown=True, breakdown_time=state.t)
        if on_output is not None:
            on_output(state)
    return RunResult(records, state)
