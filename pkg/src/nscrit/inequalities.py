"""Numerical evaluation of the anisotropic trilinear and directional
interpolation inequalities on test functions.

Each evaluator returns both sides of the target inequality with the
unknown multiplicative constant stripped from the right side, so the
reported ratio lhs/rhs_factor is an empirical lower bound on that
constant. Ratios are recorded and regression-guarded, never asserted
against a specific value.

Kinds:
  trilinear_x1    |int phi f g| vs norms singling out d phi / d x1
  trilinear_x3    same with the x3 derivative of phi (axes 1 and 2 on f)
  ladyzhenskaya   ||psi||_r vs directional/H1 interpolation, r in [2, 6]
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from . import kernels
from .fields import (
    ScalarField,
    derivative,
    forward,
    inverse,
    random_bandlimited,
)
from .grid import GridSpec
from .norms import h1_norm, lp_norm

TRILINEAR_KINDS = ("trilinear_x1", "trilinear_x3")
KINDS = TRILINEAR_KINDS + ("ladyzhenskaya",)

DEGENERATE_TOL = 1e-13


@dataclass(frozen=True)
class InequalityReport:
    kind: str
    r: float
    lhs: float
    rhs_factor: float
    ratio: float
    degenerate: bool
    # ladyzhenskaya only: the weaker H1-product form of the right side
    rhs_factor_weak: float | None = None
    ratio_weak: float | None = None


@dataclass(frozen=True)
class InequalityCase:
    """One evaluated sweep case (seed identifies the field draw)."""

    kind: str
    r: float
    seed: int
    report: InequalityReport


@dataclass(frozen=True)
class SweepSummary:
    kind: str
    r: float
    n_samples: int
    ratio_min: float
    ratio_median: float
    ratio_max: float


def _check_shared_grid(*fields: ScalarField) -> GridSpec:
    grid = fields[0].grid
    for f in fields[1:]:
        if f.grid != grid:
            raise ValueError("fields must share one grid")
    return grid


def _ratio(lhs: float, rhs: float) -> tuple[float, bool]:
    if rhs < DEGENERATE_TOL:
        return math.nan, True
    return lhs / rhs, False


def _deriv_lp(field: ScalarField, axis: int, p: float) -> float:
    return lp_norm(inverse(derivative(forward(field), axis)), p).value


def eval_trilinear(phi: ScalarField, f: ScalarField, g: ScalarField, r: float, phi_axis: int) -> InequalityReport:
    """Both sides of the anisotropic trilinear bound.

    lhs = |int phi f g dx|; the right-side factor singles out the
    ``phi_axis`` derivative of phi in L^(2/(3-r)) and the two remaining
    axis derivatives of f in L^2:

      ||phi||_2^((r-1)/r) ||d_a phi||_{2/(3-r)}^(1/r)
      ||f||_2^((r-2)/r) ||d_b f||_2^(1/r) ||d_c f||_2^(1/r) ||g||_2
    """
    if not (2.0 < r < 3.0):
        raise ValueError(f"exponent r must lie in (2, 3), got {r}")
    if phi_axis not in (1, 3):
        raise ValueError(f"phi_axis must be 1 or 3, got {phi_axis}")
    grid = _check_shared_grid(phi, f, g)
    f_axes = (2, 3) if phi_axis == 1 else (1, 2)

    lhs = abs(
        grid.cell_volume
        * kernels.triple_product_sum(phi.samples.ravel(), f.samples.ravel(), g.samples.ravel())
    )
    p_dual = 2.0 / (3.0 - r)
    rhs = (
        lp_norm(phi, 2.0).value ** ((r - 1.0) / r)
        * _deriv_lp(phi, phi_axis, p_dual) ** (1.0 / r)
        * lp_norm(f, 2.0).value ** ((r - 2.0) / r)
        * _deriv_lp(f, f_axes[0], 2.0) ** (1.0 / r)
        * _deriv_lp(f, f_axes[1], 2.0) ** (1.0 / r)
        * lp_norm(g, 2.0).value
    )
    ratio, degenerate = _ratio(lhs, rhs)
    kind = "trilinear_x1" if phi_axis == 1 else "trilinear_x3"
    return InequalityReport(kind, r, lhs, rhs, ratio, degenerate)


def eval_trilinear_x1(phi: ScalarField, f: ScalarField, g: ScalarField, r: float) -> InequalityReport:
    return eval_trilinear(phi, f, g, r, phi_axis=1)


def eval_trilinear_x3(phi: ScalarField, f: ScalarField, g: ScalarField, r: float) -> InequalityReport:
    return eval_trilinear(phi, f, g, r, phi_axis=3)


def eval_ladyzhenskaya(psi: ScalarField, r: float) -> InequalityReport:
    """Directional interpolation bound on the periodic box, r in [2, 6].

    rhs_factor:      ||psi||_2^((6-r)/(2r)) * prod_i (||d_i psi||_2 + ||psi||_2)^((r-2)/(2r))
    rhs_factor_weak: ||psi||_2^((6-r)/(2r)) * ||psi||_H1^(3(r-2)/(2r))
    """
    if not (2.0 <= r <= 6.0):
        raise ValueError(f"exponent r must lie in [2, 6], got {r}")
    lhs = lp_norm(psi, r).value
    l2 = lp_norm(psi, 2.0).value
    e_lead = (6.0 - r) / (2.0 * r)
    e_dir = (r - 2.0) / (2.0 * r)
    rhs = l2 ** e_lead
    for axis in (1, 2, 3):
        rhs *= (_deriv_lp(psi, axis, 2.0) + l2) ** e_dir
    rhs_weak = l2 ** e_lead * h1_norm(psi).value ** (3.0 * e_dir)
    ratio, degenerate = _ratio(lhs, rhs)
    ratio_weak, _ = _ratio(lhs, rhs_weak)
    return InequalityReport("ladyzhenskaya", r, lhs, rhs, ratio, degenerate, rhs_weak, ratio_weak)


def axis_oscillation_bound(phi: ScalarField, r: float, axis: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Discrete check of the slab bound max|phi|^r - min|phi|^r <= r int |phi|^(r-1) |d phi| dx.

    Returns (lhs, rhs) arrays over the two remaining axes. The periodic
    analogue of the line-integral bound needs the min subtracted (a
    constant field has zero derivative but nonzero max).
    """
    if axis not in (1, 2, 3):
        raise ValueError(f"axis must be 1, 2 or 3, got {axis}")
    a = np.abs(phi.samples)
    lhs = np.max(a, axis=axis - 1) ** r - np.min(a, axis=axis - 1) ** r
    dphi = np.abs(inverse(derivative(forward(phi), axis)).samples)
    dx = phi.grid.dx[axis - 1]
    rhs = r * np.sum(a ** (r - 1.0) * dphi, axis=axis - 1) * dx
    return lhs, rhs


# -- seeded sweeps ---------------------------------------------------------

def _case_seeds(seed: int, n: int) -> list[int]:
    ss = np.random.SeedSequence(seed)
    return [int(s.generate_state(1)[0]) for s in ss.spawn(n)]


def iter_cases(
    kind: str,
    r_list: Sequence[float],
    grid: GridSpec,
    n_samples: int,
    seed: int,
    family: str = "bandlimited",
    max_mode: int | None = None,
) -> Iterator[InequalityCase]:
    """Deterministic stream of evaluated cases for one inequality kind."""
    if kind not in KINDS:
        raise ValueError(f"unknown inequality kind {kind!r}; expected one of {KINDS}")
    if family != "bandlimited":
        raise ValueError(f"unknown field family {family!r}")
    if max_mode is None:
        max_mode = max(1, min(grid.shape) // 4)
    for r in r_list:
        for case_seed in _case_seeds(seed, n_samples):
            rng = np.random.default_rng(case_seed)
            if kind == "ladyzhenskaya":
                psi = random_bandlimited(grid, max_mode, rng)
                report = eval_ladyzhenskaya(psi, r)
            else:
                phi = random_bandlimited(grid, max_mode, rng)
                f = random_bandlimited(grid, max_mode, rng)
                g = random_bandlimited(grid, max_mode, rng)
                report = eval_trilinear(phi, f, g, r, phi_axis=1 if kind == "trilinear_x1" else 3)
            yield InequalityCase(kind, float(r), case_seed, report)


def sweep_constants(
    kind: str,
    r_list: Sequence[float],
    grid: GridSpec,
    n_samples: int,
    seed: int,
    family: str = "bandlimited",
    max_mode: int | None = None,
) -> tuple[list[InequalityCase], list[SweepSummary]]:
    """Evaluate a seeded family and aggregate ratio statistics per (kind, r)."""
    cases = list(iter_cases(kind, r_list, grid, n_samples, seed, family, max_mode))
    summaries = []
    for r in r_list:
        ratios = [c.report.ratio for c in cases if c.r == float(r) and not c.report.degenerate]
        if ratios:
            summaries.append(
                SweepSummary(
                    kind,
                    float(r),
                    len(ratios),
                    float(np.min(ratios)),
                    float(np.median(ratios)),
                    float(np.max(ratios)),
                )
            )
    return cases, summaries


def exponent_map_r_of_alpha(alpha) -> Fraction:
    """r = (3*alpha - 2)/alpha, the exponent pairing used with the trilinear bounds.

    Exact in rational arithmetic; validates 2 < r < 3 and the dual
    identity 2/(3 - r) == alpha.
    """
    a = Fraction(alpha)
    if a <= 2:
        raise ValueError(f"alpha must exceed 2, got {alpha}")
    r = (3 * a - 2) / a
    assert Fraction(2) < r < Fraction(3)
    assert Fraction(2) / (3 - r) == a
    return r
