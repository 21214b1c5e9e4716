import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from passive_battery import (
    DiagonalState,
    PreconditionError,
    QubitBattery,
    brute_force_charge,
    charging_possible,
    classical_stochastic_map,
    delta_full_cascade,
    entropy_pollution,
    full_swap_feasible,
    optimal_charge,
    quantum_stochastic_map,
    supercharge_feasible,
    thermal_delta,
)
from passive_battery.charging import (
    all_classical_maps,
    alpha_scan,
    binary_entropy,
    ladder_charge_amounts,
    reachable_ground_population,
)
from strategies import passive_batteries, passive_chargers, random_battery, random_passive


def ladder(*q):
    return DiagonalState.on_ladder(q)


B82 = QubitBattery(0.8, 0.2)
B64 = QubitBattery(0.6, 0.4)
Q541 = ladder(0.5, 0.4, 0.1)
Q532 = ladder(0.5, 0.3, 0.2)


def pair_gains(battery, q):
    """Independent oracle: each pair |0,k>,|1,k-1> can move max(0, p0 q_k - p1 q_{k-1})."""
    return sum(max(0.0, battery.p0 * q[k] - battery.p1 * q[k - 1]) for k in range(1, len(q)))


class TestChargingPossible:
    def test_examples(self):
        assert charging_possible(B82, Q541)
        assert not charging_possible(QubitBattery(0.55, 0.45), Q532)

    def test_pure_battery(self):
        assert charging_possible(QubitBattery(1, 0), Q532)
        assert not charging_possible(QubitBattery(1, 0), ladder(1, 0, 0))

    def test_active_battery_raises(self):
        with pytest.raises(PreconditionError):
            charging_possible(QubitBattery(0.3, 0.7), Q532)

    def test_active_charger_raises(self):
        with pytest.raises(PreconditionError):
            charging_possible(B82, ladder(0.2, 0.8))


class TestOptimalCharge:
    @pytest.mark.parametrize("battery, charger, delta", [
        (B64, Q541, 0.04), (B64, Q532, 0.0), (B82, Q541, 0.22), (B82, Q532, 0.24)])
    def test_delta_table(self, battery, charger, delta):
        assert optimal_charge(battery, charger).delta == pytest.approx(delta, abs=1e-12)

    def test_pure_battery_final(self):
        for q in (Q541, Q532, ladder(0.7, 0.2, 0.1, 0.0)):
            final = optimal_charge(QubitBattery(1, 0), q).final
            assert final.p0 == pytest.approx(q.probs[0], abs=1e-15)
            assert final.p1 == pytest.approx(1 - q.probs[0], abs=1e-15)

    def test_swapped_levels(self):
        assert optimal_charge(B82, Q541).swapped == (1,)
        assert optimal_charge(B82, Q532).swapped == (1, 2)
        assert optimal_charge(B64, Q532).swapped == ()

    @given(passive_batteries(), passive_chargers())
    def test_matches_pair_oracle(self, b, q):
        assert optimal_charge(b, q).delta == pytest.approx(pair_gains(b, q.probs), abs=1e-12)

    @given(passive_batteries(), passive_chargers())
    def test_biconditional(self, b, q):
        assert (optimal_charge(b, q).delta > 0) == charging_possible(b, q)

    @given(passive_batteries(), passive_chargers())
    def test_conserves_probability(self, b, q):
        f = optimal_charge(b, q).final
        assert f.p0 + f.p1 == pytest.approx(1.0, abs=1e-12)


class TestBruteForce:
    def test_anchor(self):
        assert brute_force_charge(B82, Q541).delta == optimal_charge(B82, Q541).delta

    def test_ground_charger_identity(self):
        assert brute_force_charge(QubitBattery(0.7, 0.3), ladder(1, 0, 0)).delta == 0

    def test_random_instances_exact(self):
        rng = np.random.default_rng(11)
        for _ in range(300):
            b, q = random_battery(rng), random_passive(rng, int(rng.integers(2, 6)))
            fast, slow = optimal_charge(b, q), brute_force_charge(b, q)
            assert fast.delta == slow.delta and fast.final == slow.final


class TestFullCascade:
    def test_examples(self):
        assert delta_full_cascade(B82, Q541) == pytest.approx(0.22, abs=1e-12)
        assert delta_full_cascade(B82, Q532) == pytest.approx(0.24, abs=1e-12)

    @pytest.mark.parametrize("d", range(2, 7))
    def test_pure_battery_uniform(self, d):
        assert delta_full_cascade(QubitBattery(1, 0), DiagonalState.uniform(d)) == pytest.approx((d - 1) / d)

    def test_precondition(self):
        with pytest.raises(PreconditionError):
            delta_full_cascade(B64, Q532)

    @given(passive_batteries(), passive_chargers())
    def test_agrees_when_all_pairs_charge(self, b, q):
        p = q.probs
        if np.all(b.p0 * p[1:] >= b.p1 * p[:-1]):
            assert delta_full_cascade(b, q) == pytest.approx(optimal_charge(b, q).delta, abs=1e-12)


def thermal_delta_exact(p0, x, d):
    """Exact rational oracle with x = exp(-beta) rational."""
    p0, x = Fraction(p0), Fraction(x)
    z = sum(x**j for j in range(d))
    q = [x**j / z for j in range(d)]
    return sum(max(Fraction(0), p0 * q[k] - (1 - p0) * q[k - 1]) for k in range(1, d))


class TestThermalDelta:
    def test_ln2_exact(self):
        # q = (4/7, 2/7, 1/7): 0.8*(2/7 + 1/7) - 0.2*(4/7 + 2/7) = 6/35
        got = thermal_delta(B82, math.log(2), 3)
        assert got.charges
        assert got.delta == pytest.approx(6 / 35, abs=1e-12)
        assert float(thermal_delta_exact(Fraction(4, 5), Fraction(1, 2), 3)) == pytest.approx(6 / 35, abs=1e-15)

    @pytest.mark.parametrize("d", range(2, 7))
    def test_uniform_limit(self, d):
        assert thermal_delta(B82, 0.0, d).delta == pytest.approx(0.6 * (1 - 1 / d), abs=1e-12)

    def test_cold_limit(self):
        assert thermal_delta(B82, 40.0, 3).delta == pytest.approx(0.0, abs=1e-9)

    def test_hotter_battery_does_not_charge(self):
        assert thermal_delta(B82, 2.0, 3) == (0.0, False)

    @given(st.floats(0.05, 0.95), st.integers(2, 6), st.sampled_from([1, 2, 3, 4]))
    def test_matches_optimal_charge(self, p1_frac, d, n):
        beta = n * 0.3
        b = QubitBattery(1 - p1_frac / 2, p1_frac / 2)
        expected = optimal_charge(b, DiagonalState.gibbs(beta, d)).delta
        assert thermal_delta(b, beta, d).delta == pytest.approx(expected, abs=1e-12)


class TestEntropyPollution:
    def test_uniform_charger(self):
        s = binary_entropy(0.4) - binary_entropy(0.8)
        assert s == pytest.approx(0.172609, abs=1e-6)
        assert entropy_pollution(B82, DiagonalState.uniform(3)) == pytest.approx(s / 0.4, abs=1e-12)

    @given(passive_batteries(), passive_chargers())
    def test_positive_whenever_charging(self, b, q):
        if optimal_charge(b, q).delta > 1e-9 and b.p1 > 0:
            assert entropy_pollution(b, q) > 0

    def test_pure_battery_activation_lowers_pollution(self):
        pure = QubitBattery(1, 0)
        active = entropy_pollution(pure, ladder(0.4, 0.35, 0.25))
        assert optimal_charge(pure, ladder(0.4, 0.35, 0.25)).final.p1 > 0.5
        grid = [entropy_pollution(pure, ladder(q0, 1 - q0 - q2, q2))
                for q0 in np.linspace(0.5, 0.95, 10) for q2 in np.linspace(0, (1 - q0) / 2, 5)]
        assert active < min(grid)

    def test_no_charge_raises(self):
        with pytest.raises(PreconditionError):
            entropy_pollution(B64, Q532)


class TestVectorizedAmounts:
    @given(passive_batteries(), st.lists(passive_chargers(4, 4), min_size=1, max_size=6))
    def test_matches_scalar(self, b, chargers):
        rows = np.array([q.probs for q in chargers])
        np.testing.assert_allclose(ladder_charge_amounts(b, rows),
                                   [optimal_charge(b, q).delta for q in chargers], atol=1e-12)


class TestStochasticMaps:
    def test_identity(self):
        m = classical_stochastic_map(Q541, [])
        np.testing.assert_array_equal(m.matrix, np.eye(2))

    def test_single_swap(self):
        m = classical_stochastic_map(Q541, {1})
        np.testing.assert_allclose(m.matrix, [[0.6, 0.5], [0.4, 0.5]])
        out = m.apply(B82)
        assert (out.p0, out.p1) == pytest.approx((0.58, 0.42))
        assert m.delta(B82) == pytest.approx(0.22)

    def test_two_swaps(self):
        assert classical_stochastic_map(Q541, {1, 2}).delta(B82) == pytest.approx(0.22, abs=1e-12)

    def test_quantum_endpoints(self):
        ident = quantum_stochastic_map(Q541, {1: math.pi / 2, 2: math.pi / 2})
        np.testing.assert_allclose(ident.matrix, np.eye(2), atol=1e-15)
        full = quantum_stochastic_map(Q541, {1: 0.0, 2: 0.0})
        np.testing.assert_allclose(full.matrix, classical_stochastic_map(Q541, {1, 2}).matrix)

    def test_partial_rotation_unreachable_classically(self):
        m = quantum_stochastic_map(Q541, {1: math.pi / 4})
        assert m.delta(B82) == pytest.approx(0.11, abs=1e-12)
        out = m.apply(B82)
        assert (out.p0, out.p1) == pytest.approx((0.69, 0.31))
        classical = [classical_stochastic_map(Q541, ks).apply(B82).p0 for ks in ([], [1])]
        assert all(abs(p - 0.69) > 0.01 for p in classical)

    def test_bad_levels(self):
        with pytest.raises(ValueError):
            classical_stochastic_map(Q541, [3])
        with pytest.raises(ValueError):
            quantum_stochastic_map(Q541, {1: 2.0})

    @given(passive_chargers())
    def test_passive_maps_obey_constraint(self, q):
        assert all(m.passive_constraint for m in all_classical_maps(q))
        assert len(all_classical_maps(q)) == 2 ** (q.dim - 1)


class TestNoGo:
    def test_examples(self):
        assert not full_swap_feasible(B82, Q541)
        assert full_swap_feasible(B82, ladder(0, 1))
        assert full_swap_feasible(QubitBattery(0.5, 0.5), Q532)

    @given(passive_chargers(2, 4))
    def test_passive_ancillas_never_invert_or_supercharge(self, q):
        assert not full_swap_feasible(B82, q)
        assert not supercharge_feasible(B82, q)

    def test_active_ancilla_supercharges(self):
        # exchanging with an excited qubit inverts (0.8, 0.2) and (0.5, 0.5) gains purity
        assert supercharge_feasible(B82, ladder(0, 1)) is True
        assert supercharge_feasible(QubitBattery(0.5, 0.5), ladder(0, 1)) is True
        assert supercharge_feasible(QubitBattery(0.5, 0.5), Q532) is False

    @given(passive_batteries(), passive_chargers(2, 4))
    def test_interval_ends_are_classical(self, b, q):
        lo, hi = reachable_ground_population(b, q)
        ends = [m.apply(b).p0 for m in all_classical_maps(q)]
        assert lo == pytest.approx(min(ends), abs=1e-12)
        assert hi == pytest.approx(max(ends), abs=1e-12)

    @given(passive_batteries(), passive_chargers(2, 5))
    @settings(max_examples=50)
    def test_alpha_optimum_at_endpoint(self, b, q):
        angles = np.linspace(0, math.pi / 2, 10)
        for k in range(1, q.dim):
            scan = alpha_scan(b, q, k, angles)
            assert scan.max() == pytest.approx(max(scan[0], scan[-1]), abs=1e-15)
