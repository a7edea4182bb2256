"""Single-entry velocity-gradient diagnostics: admissible exponent algebra,
running criterion integrals, exponential a priori bound tracking and the
energy-budget audit.

Exponent conventions for the monitored entry d u_j / d x_k:

  off-diagonal (j != k): alpha > 3, admissible when
      3/alpha + 2/beta <= (alpha + 3) / (2 alpha)
  diagonal (j == k): alpha > 2, admissible when
      3/alpha + 2/beta <= 3 (alpha + 2) / (4 alpha)

The boundary beta solving the equality coincides with the exponent that
closes the exponential gradient bound: 4 alpha/(alpha - 3) off-diagonal,
8 alpha/(3 (alpha - 2)) diagonal. Both are computed in exact rational
arithmetic. The intro-style strict inequality is surfaced as a secondary
flag; the operative test uses "<=".
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from .fields import VectorField, derivative, forward, inverse
from .norms import NormValue, grad_norms, lp_norm

OFF_DIAGONAL = "off_diagonal"
DIAGONAL = "diagonal"


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"exponent must be finite, got {x}")
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational exponent")


def _check_alpha(alpha: Fraction, kind: str) -> None:
    if kind == OFF_DIAGONAL:
        if alpha <= 3:
            raise ValueError(f"off-diagonal entries require alpha > 3, got {alpha}")
    elif kind == DIAGONAL:
        if alpha <= 2:
            raise ValueError(f"diagonal entries require alpha > 2, got {alpha}")
    else:
        raise ValueError(f"kind must be {OFF_DIAGONAL!r} or {DIAGONAL!r}, got {kind!r}")


def admissibility_bound(alpha, kind: str) -> Fraction:
    """Right side of the admissibility inequality for 3/alpha + 2/beta."""
    a = _as_fraction(alpha)
    _check_alpha(a, kind)
    if kind == OFF_DIAGONAL:
        return (a + 3) / (2 * a)
    return 3 * (a + 2) / (4 * a)


def beta_min(alpha, kind: str) -> Fraction:
    """Boundary beta solving 3/alpha + 2/beta = admissibility_bound(alpha), exact.

    Solved from the inequality itself (not from a closed form), so the
    identity beta_min == gronwall_exponent is a genuine cross-check of
    two derivations.
    """
    a = _as_fraction(alpha)
    _check_alpha(a, kind)
    slack = admissibility_bound(a, kind) - Fraction(3) / a
    return Fraction(2) / slack


def gronwall_exponent(alpha, kind: str) -> Fraction:
    """Time exponent of the entry norm inside the exponential gradient bound."""
    a = _as_fraction(alpha)
    _check_alpha(a, kind)
    if kind == OFF_DIAGONAL:
        return 4 * a / (a - 3)
    return 8 * a / (3 * (a - 2))


@dataclass(frozen=True)
class AdmissibilityVerdict:
    alpha: Fraction
    beta: Fraction
    kind: str
    satisfied_strict: bool
    satisfied_weak: bool
    beta_min: Fraction


def is_admissible(alpha, beta, kind: str) -> AdmissibilityVerdict:
    """Evaluate both the weak (<=) and strict (<) exponent conditions."""
    a = _as_fraction(alpha)
    b = _as_fraction(beta)
    _check_alpha(a, kind)
    if b < 1:
        raise ValueError(f"beta must satisfy 1 <= beta < inf, got {beta}")
    lhs = Fraction(3) / a + Fraction(2) / b
    bound = admissibility_bound(a, kind)
    return AdmissibilityVerdict(
        alpha=a,
        beta=b,
        kind=kind,
        satisfied_strict=lhs < bound,
        satisfied_weak=lhs <= bound,
        beta_min=beta_min(a, kind),
    )


@dataclass(frozen=True)
class CriterionSpec:
    """One monitored condition on the entry d u_j / d x_k."""

    j: int
    k: int
    alpha: float
    beta: float

    def __post_init__(self):
        if self.j not in (1, 2, 3) or self.k not in (1, 2, 3):
            raise ValueError(f"entry indices must lie in 1..3, got ({self.j}, {self.k})")
        threshold = 2.0 if self.j == self.k else 3.0
        if not (self.alpha > threshold and math.isfinite(self.alpha)):
            raise ValueError(f"{self.kind} entry requires alpha > {threshold:g}, got {self.alpha}")
        if not (1.0 <= self.beta and math.isfinite(self.beta)):
            raise ValueError(f"beta must satisfy 1 <= beta < inf, got {self.beta}")

    @property
    def kind(self) -> str:
        return DIAGONAL if self.j == self.k else OFF_DIAGONAL

    @property
    def label(self) -> str:
        return f"{self.j}{self.k}_a{self.alpha:g}_b{self.beta:g}"


def entry_norm(u: VectorField, j: int, k: int, alpha: float) -> NormValue:
    """||d u_j / d x_k||_alpha via spectral derivative and quadrature."""
    if j not in (1, 2, 3) or k not in (1, 2, 3):
        raise ValueError(f"entry indices must lie in 1..3, got ({j}, {k})")
    return lp_norm(inverse(derivative(forward(u.component(j)), k)), alpha)


def accumulate(integral: float, t_prev: float, value_prev: float, t: float, value: float, beta: float) -> float:
    """Trapezoid update of int ||.||^beta ds; non-decreasing by construction."""
    if t < t_prev:
        raise ValueError(f"time must be non-decreasing, got {t_prev} -> {t}")
    return integral + 0.5 * (t - t_prev) * (value_prev ** beta + value ** beta)


def _exp_bound(c_hat: float, grad0_sq: float, integral: float) -> float:
    """c_hat (1 + grad0_sq) exp(c_hat * integral), saturating to inf.

    The surrogate constant is user-chosen, so the bound can exceed float
    range for rough fields; it is report-only and allowed to saturate.
    """
    try:
        return c_hat * (1.0 + grad0_sq) * math.exp(c_hat * integral)
    except OverflowError:
        return math.inf


@dataclass(frozen=True)
class MonitorRecord:
    t: float
    energy: float                      # ||u||_2^2
    grad_l2: float                     # ||grad u||_2^2
    grad_h_l2: float                   # ||grad_h u||_2^2
    entry_norms: dict[float, np.ndarray]  # alpha -> 3x3 matrix of ||d u_j/d x_k||_alpha
    criterion_integrals: tuple[float, ...]
    gronwall_integrals: tuple[float, ...]
    gronwall_bounds: tuple[float, ...]
    dissipation_integral: float
    energy_residual: float


class CriterionAccumulator:
    """Builds the per-output record series for a fixed spec list.

    Criterion integrals use trapezoid quadrature on the output cadence;
    the energy residual uses the dissipation integral accumulated by the
    solver (stage quadrature).
    """

    def __init__(self, specs: Sequence[CriterionSpec], c_hat: float = 1.0):
        self.specs = tuple(specs)
        self.c_hat = c_hat
        self.alphas = tuple(sorted({float(s.alpha) for s in self.specs}))
        self.gron_exponents = tuple(float(gronwall_exponent(Fraction(s.alpha), s.kind)) for s in self.specs)
        self._prev: MonitorRecord | None = None
        self._grad0_sq: float | None = None
        self._energy0: float | None = None

    def _entry_value(self, entries: dict[float, np.ndarray], spec: CriterionSpec) -> float:
        return float(entries[float(spec.alpha)][spec.j - 1, spec.k - 1])

    def record(self, t: float, u: VectorField, energy: float, dissipation_integral: float) -> MonitorRecord:
        g = grad_norms(u, self.alphas)
        entries = g.entries
        if self._prev is None:
            self._grad0_sq = g.grad ** 2
            self._energy0 = energy
            integrals = tuple(0.0 for _ in self.specs)
            gron = tuple(0.0 for _ in self.specs)
        else:
            prev = self._prev
            integrals = tuple(
                accumulate(
                    prev.criterion_integrals[i],
                    prev.t,
                    self._entry_value(prev.entry_norms, s),
                    t,
                    self._entry_value(entries, s),
                    s.beta,
                )
                for i, s in enumerate(self.specs)
            )
            gron = tuple(
                accumulate(
                    prev.gronwall_integrals[i],
                    prev.t,
                    self._entry_value(prev.entry_norms, s),
                    t,
                    self._entry_value(entries, s),
                    self.gron_exponents[i],
                )
                for i, s in enumerate(self.specs)
            )
        bounds = tuple(_exp_bound(self.c_hat, self._grad0_sq, gi) for gi in gron)
        rec = MonitorRecord(
            t=t,
            energy=energy,
            grad_l2=g.grad ** 2,
            grad_h_l2=g.grad_h ** 2,
            entry_norms=entries,
            criterion_integrals=integrals,
            gronwall_integrals=gron,
            gronwall_bounds=bounds,
            dissipation_integral=dissipation_integral,
            energy_residual=energy + dissipation_integral - self._energy0,
        )
        self._prev = rec
        return rec


def gronwall_tracker(records: Sequence[MonitorRecord], spec: CriterionSpec, c_hat: float = 1.0) -> list[float]:
    """Report-only exponential bound series c_hat (1 + ||grad u0||_2^2) exp(c_hat I_g).

    I_g accumulates the monitored entry norm at the exponent that closes
    the gradient estimate; the constant is user-supplied, so the output
    is emitted alongside the measured gradient, never asserted to bound it.
    """
    exponent = float(gronwall_exponent(Fraction(spec.alpha), spec.kind))
    grad0 = records[0].grad_l2
    out = []
    integral = 0.0
    prev_t = None
    prev_v = None
    for rec in records:
        v = float(rec.entry_norms[float(spec.alpha)][spec.j - 1, spec.k - 1])
        if prev_t is not None:
            integral = accumulate(integral, prev_t, prev_v, rec.t, v, exponent)
        out.append(_exp_bound(c_hat, grad0, integral))
        prev_t, prev_v = rec.t, v
    return out


@dataclass(frozen=True)
class AuditReport:
    max_abs_residual: float
    residual_violations: tuple[int, ...]
    k1_violations: tuple[int, ...]
    energy_increases: tuple[int, ...]

    @property
    def passed(self) -> bool:
        return not (self.residual_violations or self.k1_violations or self.energy_increases)


def audit_series(
    t: np.ndarray,
    energy: np.ndarray,
    grad_l2: np.ndarray,
    dissipation: np.ndarray,
    nu: float,
    residual_tol: float = 1e-5,
    k1_rel_slack: float = 1e-6,
) -> AuditReport:
    """Check the discrete energy budget and the a priori energy inequality.

    Budget: |energy + dissipation - energy0| <= residual_tol.
    Inequality: energy + nu * trapz ||grad u||_2^2 <= energy0 * (1 + slack)
    (the weaker inequality form carries slack by construction; positives
    beyond it are flagged).
    """
    if len(t) == 0:
        raise ValueError("empty record series")
    e0 = float(energy[0])
    residual = energy + dissipation - e0
    res_bad = tuple(int(i) for i in np.nonzero(np.abs(residual) > residual_tol)[0])

    trap = np.concatenate([[0.0], np.cumsum(0.5 * np.diff(t) * (grad_l2[1:] + grad_l2[:-1]))])
    k1_lhs = energy + nu * trap
    k1_bad = tuple(int(i) for i in np.nonzero(k1_lhs > e0 * (1.0 + k1_rel_slack))[0])

    inc_bad = tuple(int(i) + 1 for i in np.nonzero(np.diff(energy) > 1e-12 * max(e0, 1.0))[0])
    return AuditReport(
        max_abs_residual=float(np.max(np.abs(residual))),
        residual_violations=res_bad,
        k1_violations=k1_bad,
        energy_increases=inc_bad,
    )


def audit_energy(
    records: Sequence[MonitorRecord],
    nu: float,
    residual_tol: float = 1e-5,
    k1_rel_slack: float = 1e-6,
) -> AuditReport:
    """Energy audit over an in-memory record series (see audit_series)."""
    return audit_series(
        np.array([r.t for r in records]),
        np.array([r.energy for r in records]),
        np.array([r.grad_l2 for r in records]),
        np.array([r.dissipation_integral for r in records]),
        nu,
        residual_tol,
        k1_rel_slack,
    )


# -- CSV emission ---------------------------------------------------------------

def _fmt(x: float) -> str:
    return format(x, ".17g")


def series_header(specs: Sequence[CriterionSpec], alphas: Sequence[float]) -> list[str]:
    cols = ["t", "energy", "grad_l2", "grad_h_l2"]
    for a in alphas:
        cols.extend(f"d{j}{k}_a{a:g}" for j in (1, 2, 3) for k in (1, 2, 3))
    cols.extend(f"I_{s.label}" for s in specs)
    cols.append("energy_residual")
    cols.extend(f"B_{s.j}{s.k}_a{s.alpha:g}" for s in specs)
    cols.append("dissipation_integral")
    return cols


def write_series_csv(path: Path, records: Sequence[MonitorRecord], specs: Sequence[CriterionSpec]) -> None:
    """One row per output time, 17 significant digits."""
    alphas = tuple(sorted({float(s.alpha) for s in specs}))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(series_header(specs, alphas))
        for r in records:
            row = [_fmt(r.t), _fmt(r.energy), _fmt(r.grad_l2), _fmt(r.grad_h_l2)]
            for a in alphas:
                m = r.entry_norms[a]
                row.extend(_fmt(float(m[j, k])) for j in range(3) for k in range(3))
            row.extend(_fmt(v) for v in r.criterion_integrals)
            row.append(_fmt(r.energy_residual))
            row.extend(_fmt(b) for b in r.gronwall_bounds)
            row.append(_fmt(r.dissipation_integral))
            writer.writerow(row)


def read_series_csv(path: Path) -> dict[str, np.ndarray]:
    """Column name -> float array."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [list(map(float, row)) for row in reader]
    data = np.array(rows) if rows else np.zeros((0, len(header)))
    return {name: data[:, i] for i, name in enumerate(header)}
