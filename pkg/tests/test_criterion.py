"""Exponent algebra (exact rationals), entry norms, integral accumulation,
bound tracking and the energy audit."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nscrit.criterion import (
    DIAGONAL,
    OFF_DIAGONAL,
    AdmissibilityVerdict,
    CriterionSpec,
    MonitorRecord,
    accumulate,
    admissibility_bound,
    audit_energy,
    beta_min,
    entry_norm,
    gronwall_exponent,
    gronwall_tracker,
    is_admissible,
)
from nscrit.fields import VectorField, taylor_green

PI = np.pi

off_alphas = st.fractions(min_value=Fraction(31, 10), max_value=Fraction(100))
diag_alphas = st.fractions(min_value=Fraction(21, 10), max_value=Fraction(100))


class TestExponentAlgebra:
    def test_beta_min_off_diagonal_spot(self):
        assert beta_min(9, OFF_DIAGONAL) == Fraction(6)

    def test_beta_min_diagonal_spot(self):
        assert beta_min(6, DIAGONAL) == Fraction(4)

    def test_beta_min_solves_boundary_equality(self):
        for alpha, kind in ((Fraction(7, 2), OFF_DIAGONAL), (Fraction(5, 2), DIAGONAL)):
            b = beta_min(alpha, kind)
            assert Fraction(3) / alpha + Fraction(2) / b == admissibility_bound(alpha, kind)

    def test_beta_min_pole_near_threshold(self):
        assert beta_min(Fraction(3001, 1000), OFF_DIAGONAL) > 10**4

    @pytest.mark.parametrize("alpha,kind", [(3, OFF_DIAGONAL), (2, DIAGONAL), (1, OFF_DIAGONAL)])
    def test_rejects_threshold_alpha(self, alpha, kind):
        with pytest.raises(ValueError):
            beta_min(alpha, kind)
        with pytest.raises(ValueError):
            gronwall_exponent(alpha, kind)

    def test_gronwall_spots(self):
        assert gronwall_exponent(9, OFF_DIAGONAL) == Fraction(6)
        assert gronwall_exponent(6, DIAGONAL) == Fraction(4)

    @given(off_alphas)
    @settings(deadline=None, max_examples=100)
    def test_identity_off_diagonal(self, alpha):
        assert beta_min(alpha, OFF_DIAGONAL) == gronwall_exponent(alpha, OFF_DIAGONAL)

    @given(diag_alphas)
    @settings(deadline=None, max_examples=100)
    def test_identity_diagonal(self, alpha):
        assert beta_min(alpha, DIAGONAL) == gronwall_exponent(alpha, DIAGONAL)

    def test_float_alpha_handled_exactly(self):
        # Fraction(float) is the exact binary value, so 9.0 behaves like 9
        assert beta_min(9.0, OFF_DIAGONAL) == Fraction(6)


class TestAdmissibility:
    def test_boundary_pair_weak_only(self):
        v = is_admissible(9, 6, OFF_DIAGONAL)
        assert v.satisfied_weak and not v.satisfied_strict
        assert v.beta_min == 6

    def test_interior_pair_both(self):
        v = is_admissible(9, 7, OFF_DIAGONAL)
        assert v.satisfied_weak and v.satisfied_strict

    def test_below_boundary_neither(self):
        v = is_admissible(9, 5, OFF_DIAGONAL)
        assert not v.satisfied_weak and not v.satisfied_strict

    def test_diagonal_counterexample(self):
        """3/4 + 2/4 = 5/4 exceeds 3*(4+2)/(4*4) = 9/8."""
        v = is_admissible(4, 4, DIAGONAL)
        assert not v.satisfied_weak

    def test_diagonal_boundary(self):
        v = is_admissible(6, 4, DIAGONAL)
        assert v.satisfied_weak and not v.satisfied_strict

    @given(off_alphas, st.fractions(min_value=1, max_value=1000))
    @settings(deadline=None, max_examples=100)
    def test_strict_implies_weak(self, alpha, beta):
        v = is_admissible(alpha, beta, OFF_DIAGONAL)
        if v.satisfied_strict:
            assert v.satisfied_weak

    def test_rejects_beta_below_one(self):
        with pytest.raises(ValueError, match="beta"):
            is_admissible(9, Fraction(1, 2), OFF_DIAGONAL)

    def test_exact_rationals_in_verdict(self):
        v = is_admissible("25/7", "13/2", OFF_DIAGONAL)
        assert isinstance(v, AdmissibilityVerdict)
        assert v.alpha == Fraction(25, 7)
        assert v.beta_min == Fraction(25)


class TestCriterionSpec:
    def test_kind_derivation(self):
        assert CriterionSpec(3, 1, 9.0, 6.0).kind == OFF_DIAGONAL
        assert CriterionSpec(3, 3, 6.0, 4.0).kind == DIAGONAL

    def test_off_diagonal_requires_alpha_above_three(self):
        with pytest.raises(ValueError, match="alpha"):
            CriterionSpec(3, 1, 3.0, 6.0)

    def test_diagonal_requires_alpha_above_two(self):
        CriterionSpec(2, 2, 2.5, 4.0)
        with pytest.raises(ValueError, match="alpha"):
            CriterionSpec(2, 2, 2.0, 4.0)

    def test_rejects_bad_indices_and_beta(self):
        with pytest.raises(ValueError):
            CriterionSpec(0, 1, 9.0, 6.0)
        with pytest.raises(ValueError):
            CriterionSpec(3, 1, 9.0, 0.5)
        with pytest.raises(ValueError):
            CriterionSpec(3, 1, 9.0, math.inf)


class TestEntryNorm:
    def test_taylor_green_third_row_zero(self, grid16):
        u = taylor_green(grid16)
        for k in (1, 2, 3):
            assert entry_norm(u, 3, k, 9.0).value == 0.0

    def test_taylor_green_12_entry(self, grid32):
        """d u1/d x2 = -sin x1 sin x2 cos x3, L2 norm pi^(3/2)."""
        u = taylor_green(grid32)
        assert entry_norm(u, 1, 2, 2.0).value == pytest.approx(PI**1.5, rel=1e-12)

    def test_zero_field(self, grid16):
        zero = VectorField.from_samples(
            grid16, np.zeros(grid16.shape), np.zeros(grid16.shape), np.zeros(grid16.shape)
        )
        assert entry_norm(zero, 1, 1, 4.0).value == 0.0


class TestAccumulate:
    def test_constant_value(self):
        integral = 0.0
        t = np.linspace(0.0, 2.0, 9)
        for t0, t1 in zip(t, t[1:]):
            integral = accumulate(integral, t0, 3.0, t1, 3.0, 2.0)
        assert integral == pytest.approx(2.0 * 9.0, rel=1e-12)

    def test_zero_value_leaves_integral(self):
        assert accumulate(5.0, 0.0, 0.0, 1.0, 0.0, 3.0) == 5.0

    def test_linear_ramp_matches_analytic(self):
        """v(t) = t, beta = 2: integral of t^2 is 1/3 up to O(h^2)."""
        t = np.linspace(0.0, 1.0, 101)
        integral = 0.0
        for t0, t1 in zip(t, t[1:]):
            integral = accumulate(integral, t0, t0, t1, t1, 2.0)
        assert integral == pytest.approx(np.trapezoid(t**2, t), rel=1e-13)
        assert abs(integral - 1.0 / 3.0) < 2e-5

    def test_rejects_time_reversal(self):
        with pytest.raises(ValueError):
            accumulate(0.0, 1.0, 1.0, 0.5, 1.0, 2.0)


def _record(t, energy, grad, entry, diss=0.0):
    m = np.zeros((3, 3))
    m[2, 0] = entry
    return MonitorRecord(
        t=t,
        energy=energy,
        grad_l2=grad,
        grad_h_l2=grad,
        entry_norms={9.0: m},
        criterion_integrals=(0.0,),
        gronwall_integrals=(0.0,),
        gronwall_bounds=(0.0,),
        dissipation_integral=diss,
        energy_residual=energy + diss,
    )


class TestGronwallTracker:
    spec = CriterionSpec(3, 1, 9.0, 6.0)

    def test_zero_integrand_constant_bound(self):
        recs = [_record(t, 1.0, 2.0, 0.0) for t in (0.0, 0.5, 1.0)]
        bounds = gronwall_tracker(recs, self.spec, c_hat=2.0)
        assert bounds == [2.0 * 3.0] * 3

    def test_non_decreasing(self):
        recs = [_record(t, 1.0, 2.0, 0.5 + 0.1 * t) for t in (0.0, 0.5, 1.0, 1.5)]
        bounds = gronwall_tracker(recs, self.spec)
        assert all(b1 <= b2 for b1, b2 in zip(bounds, bounds[1:]))

    def test_doubling_c_hat_more_than_doubles(self):
        recs = [_record(t, 1.0, 2.0, 1.0) for t in (0.0, 1.0)]
        b1 = gronwall_tracker(recs, self.spec, c_hat=1.0)[-1]
        b2 = gronwall_tracker(recs, self.spec, c_hat=2.0)[-1]
        assert b2 > 2.0 * b1

    def test_saturates_instead_of_overflowing(self):
        recs = [_record(0.0, 1.0, 2.0, 10.0), _record(100.0, 1.0, 2.0, 10.0)]
        assert gronwall_tracker(recs, self.spec)[-1] == math.inf


class TestAuditEnergy:
    def test_single_initial_record_passes(self):
        recs = [_record(0.0, 10.0, 3.0, 0.0)]
        report = audit_energy(recs, nu=0.1)
        assert report.max_abs_residual == 0.0
        assert report.passed

    def test_flags_budget_violation(self):
        recs = [_record(0.0, 10.0, 3.0, 0.0), _record(1.0, 9.0, 3.0, 0.0, diss=0.9)]
        report = audit_energy(recs, nu=0.1, residual_tol=1e-5)
        assert report.residual_violations == (1,)
        assert not report.passed

    def test_flags_energy_increase(self):
        recs = [_record(0.0, 10.0, 3.0, 0.0), _record(1.0, 10.5, 3.0, 0.0, diss=-0.5)]
        report = audit_energy(recs, nu=0.001)
        assert report.energy_increases == (1,)

    def test_flags_k1_violation(self):
        # energy grows so much that even the slack inequality fails
        recs = [_record(0.0, 1.0, 1.0, 0.0), _record(1.0, 2.0, 1.0, 0.0, diss=-1.0)]
        report = audit_energy(recs, nu=1.0)
        assert report.k1_violations != ()

    def test_empty_series_rejected(self):
        with pytest.raises(ValueError):
            audit_energy([], nu=0.1)
