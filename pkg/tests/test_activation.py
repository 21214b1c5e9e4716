import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from passive_battery import (
    DiagonalState,
    PreconditionError,
    QubitBattery,
    activates,
    activation_condition_3d,
    bath_activation_bound,
    bath_can_activate,
    majorizes,
    max_excited_population,
    strictly_thermo_majorizes,
    thermo_majorization_curve,
    thermo_majorizes,
)
from strategies import passive_batteries, passive_chargers, simplex_points


def ladder(*q):
    return DiagonalState.on_ladder(q)


HALF = QubitBattery(0.5, 0.5)
B64 = QubitBattery(0.6, 0.4)
B55 = QubitBattery(0.55, 0.45)
Q_ACT = ladder(0.4, 0.35, 0.25)


class TestMaxExcited:
    def test_uniform_charger(self):
        # 0.4 + (0.6 - 0.4)/3 * 2
        assert max_excited_population(B64, DiagonalState.uniform(3)) == pytest.approx(0.4 + 0.4 / 3, abs=1e-12)

    @given(passive_chargers())
    def test_pure_battery(self, q):
        assert max_excited_population(QubitBattery(1, 0), q) == pytest.approx(1 - q.probs[0], abs=1e-12)

    @given(passive_batteries(), st.integers(2, 5))
    def test_ground_charger(self, b, d):
        assert max_excited_population(b, ladder(*np.eye(d)[0])) == b.p1


class TestActivates:
    def test_examples(self):
        assert activates(B64, DiagonalState.uniform(3))
        assert not activates(B55, Q_ACT)
        assert max_excited_population(B55, Q_ACT) == pytest.approx(0.4625, abs=1e-12)

    @given(passive_chargers())
    def test_maximally_mixed_battery_never(self, q):
        assert max_excited_population(HALF, q) == pytest.approx(0.5, abs=1e-12)
        assert not activates(HALF, q)


class TestCondition3d:
    def test_uniform_both(self):
        v = activation_condition_3d(B64, DiagonalState.uniform(3))
        assert v.branch_both and v.activates

    def test_guard_needed(self):
        v = activation_condition_3d(B55, Q_ACT)
        assert not (v.branch_i or v.branch_ii or v.branch_both)
        assert v.formula_max == pytest.approx(2.5)
        assert v.formula_satisfied  # the unguarded formula wrongly claims activation

    def test_no_charging_gate(self):
        v = activation_condition_3d(QubitBattery(0.6, 0.4), ladder(0.5, 0.3, 0.2))
        assert not v.activates

    def test_needs_three_levels(self):
        with pytest.raises(PreconditionError):
            activation_condition_3d(B64, ladder(0.5, 0.5))

    @given(passive_batteries(), passive_chargers(3, 3))
    def test_matches_oracle(self, b, q):
        p = max_excited_population(b, q)
        if abs(p - 0.5) > 1e-9:
            assert activation_condition_3d(b, q).activates == activates(b, q)


class TestBathBound:
    def test_value(self):
        assert bath_activation_bound(QubitBattery(0.75, 0.25)) == pytest.approx(math.log(1.5), abs=1e-15)

    def test_limits(self):
        assert 0 < bath_activation_bound(QubitBattery(0.5 + 1e-9, 0.5 - 1e-9)) < 1e-8
        assert bath_activation_bound(QubitBattery(1, 0, gap=2.0)) == pytest.approx(math.log(2) / 2)

    def test_needs_population_gap(self):
        with pytest.raises(PreconditionError):
            bath_activation_bound(HALF)

    @given(st.floats(0.501, 0.999), st.floats(0.1, 5.0))
    def test_below_battery_beta(self, p0, gap):
        b = QubitBattery(p0, 1 - p0, gap)
        assert bath_activation_bound(b) < b.beta


class TestThermoCurve:
    @given(simplex_points())
    def test_beta_zero_is_lorenz(self, q):
        curve = thermo_majorization_curve(DiagonalState.on_ladder(q), 0.0)
        d = q.size
        np.testing.assert_allclose(curve.points[:, 0], np.arange(d + 1) / d, atol=1e-12)
        np.testing.assert_allclose(curve.points[1:, 1], np.cumsum(np.sort(q)[::-1]), atol=1e-12)

    @given(simplex_points(), st.floats(0.0, 5.0))
    def test_concave_and_normalized(self, q, beta):
        curve = thermo_majorization_curve(DiagonalState.on_ladder(q), beta)
        assert tuple(curve.points[0]) == (0, 0) and tuple(curve.points[-1]) == (1, 1)
        s = curve.slopes[np.isfinite(curve.slopes)]
        assert np.all(np.diff(s) <= 1e-9 * (1 + np.abs(s[1:])))

    def test_first_slope(self):
        b = QubitBattery(0.75, 0.25).as_state()
        curve = thermo_majorization_curve(b, 0.2)
        t0 = 1 / (1 + math.exp(-0.2))
        assert curve.slopes[0] == pytest.approx(0.75 / t0)

    @given(simplex_points(3, 3), simplex_points(3, 3))
    def test_beta_zero_is_majorization(self, p, q):
        P, Q = DiagonalState.on_ladder(p), DiagonalState.on_ladder(q)
        assert thermo_majorizes(P, Q, 0.0) == majorizes(p, q)


class TestThermoMajorizes:
    @given(simplex_points(), st.floats(0.0, 5.0))
    def test_reflexive(self, q, beta):
        s = DiagonalState.on_ladder(q)
        assert thermo_majorizes(s, s, beta)

    def test_activation_window(self):
        b = QubitBattery(0.75, 0.25).as_state()
        h = HALF.as_state()
        assert strictly_thermo_majorizes(b, h, 0.2)
        assert not strictly_thermo_majorizes(b, h, 0.5)
        # boundary: first slope equals 1/(2 t_1), dominance without a gap
        assert thermo_majorizes(b, h, math.log(1.5))
        assert not strictly_thermo_majorizes(b, h, math.log(1.5))

    @given(st.floats(0.51, 0.99), st.floats(0.0, 2.0))
    def test_bath_window_matches_bound(self, p0, beta):
        b = QubitBattery(p0, 1 - p0)
        edge = math.log(2 * p0)
        if abs(beta - edge) > 1e-9:
            assert bath_can_activate(b, beta) == (beta < edge)

    def test_spectrum_mismatch(self):
        with pytest.raises(ValueError):
            thermo_majorizes(ladder(0.5, 0.5), DiagonalState.uniform(3), 1.0)
