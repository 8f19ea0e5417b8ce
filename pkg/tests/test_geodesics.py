import numpy as np
import pytest

from constructor import gallery
from core.errors import ShapeError
from geodesics import (
    GeodesicState,
    IntegratorSettings,
    TerminationKind,
    completeness_probe,
    energy,
    exponential_warp_closed_form,
    fiber_invariant,
    flat_factor_rhs,
    geodesic_rhs,
    initial_states,
    integrate_geodesic,
    metric_with_partials,
    reversed_return,
    split_form_rhs,
    warp_acceleration,
)
from geodesics.probe import causal_kind

FIBER_VELOCITY = np.array([0.1, 0.5, -0.2])


def _state(position, velocity, s=0.0):
    return GeodesicState(s, np.asarray(position, dtype=float), np.asarray(velocity, dtype=float))


@pytest.fixture
def slow_state():
    return _state(np.zeros(5), 0.1 * np.array([0.3, -0.5, 0.2, 0.6, -0.4]))


class TestRightHandSides:
    def test_split_matches_christoffel(self, smooth, rng):
        for _ in range(5):
            state = _state(rng.uniform(-0.5, 0.5, 5), rng.normal(size=5))
            _, a_lc = geodesic_rhs(smooth, state)
            _, a_split = split_form_rhs(smooth, state)
            np.testing.assert_allclose(a_split, a_lc, rtol=1e-10, atol=1e-12)

    def test_metric_partials_by_differences(self, riemannian, rng):
        point = rng.uniform(-0.5, 0.5, 5)
        _, dG = metric_with_partials(riemannian, point)
        h = 1e-6
        for a in range(5):
            step = np.zeros(5)
            step[a] = h
            G_plus, _ = metric_with_partials(riemannian, point + step)
            G_minus, _ = metric_with_partials(riemannian, point - step)
            np.testing.assert_allclose(dG[a], (G_plus - G_minus) / (2 * h), atol=1e-7)

    def test_flat_factor_without_fiber_velocity(self, null_fiber):
        state = _state(np.zeros(6), [0.3, -0.2, 0.5, 0.0, 0.0, 0.0])
        _, acc = flat_factor_rhs(null_fiber, state)
        assert np.all(acc == 0.0)

    def test_warp_acceleration_is_first_base_component(self, null_fiber):
        state = _state([0.1, 0.2, 0.0, 0.3, 0.1, 0.0], [0.0, 0.0, 0.0] + list(FIBER_VELOCITY))
        _, acc = flat_factor_rhs(null_fiber, state)
        assert warp_acceleration(null_fiber, state, "flat-factor") == pytest.approx(acc[0], rel=1e-12)

    def test_state_shapes(self):
        with pytest.raises(ShapeError):
            GeodesicState(0.0, np.zeros(3), np.zeros(4))


class TestIntegration:
    def test_energy_is_conserved(self, riemannian, slow_state):
        trajectory = integrate_geodesic(riemannian, slow_state, 2.0, tol=1e-10)
        assert not trajectory.early
        assert trajectory.max_drift <= 1e-8
        assert trajectory.causal_character == pytest.approx(energy(riemannian, slow_state))

    def test_split_system_conserves_energy(self, riemannian, slow_state):
        trajectory = integrate_geodesic(riemannian, slow_state, 2.0, system="split")
        assert trajectory.max_drift <= 1e-8

    def test_time_symmetry(self, riemannian, slow_state):
        assert reversed_return(riemannian, slow_state, 2.0, tol=1e-10) <= 1e-7

    def test_samples_are_sorted(self, riemannian, slow_state):
        trajectory = integrate_geodesic(riemannian, slow_state, 1.0)
        s = trajectory.s
        assert np.all(np.diff(s) > 0.0)
        assert s[0] == pytest.approx(-1.0) and s[-1] == pytest.approx(1.0)
        header, rows = trajectory.table()
        assert header[0] == "s" and header[-1] == "drift"
        assert rows.shape == (len(s), 2 * 5 + 2)
        assert trajectory.to_json()["terminations"] == [
            {"kind": "reached-s-max", "s": s[0]},
            {"kind": "reached-s-max", "s": s[-1]},
        ]

    def test_rejects_bad_requests(self, riemannian, slow_state):
        with pytest.raises(ValueError, match="system"):
            integrate_geodesic(riemannian, slow_state, 1.0, system="euler")
        with pytest.raises(ValueError):
            integrate_geodesic(riemannian, slow_state, 0.0)
        with pytest.raises(ShapeError):
            integrate_geodesic(riemannian, _state(np.zeros(4), np.ones(4)), 1.0)
        with pytest.raises(ValueError, match="stepper"):
            IntegratorSettings(method="Euler")

    def test_start_outside_domain(self):
        candidate = gallery("singular-warp")
        trajectory = integrate_geodesic(candidate, _state([2.0, 0.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0]), 1.0)
        assert trajectory.early
        assert trajectory.termination.kind is TerminationKind.LEFT_DOMAIN

    def test_singular_warp_leaves_domain(self):
        candidate = gallery("singular-warp")
        state = _state([0.5, 0.0, 0.0, 0.0], [0.2, 0.0, 1.0, 0.0])
        trajectory = integrate_geodesic(candidate, state, 100.0, both_directions=False)
        assert trajectory.early
        assert trajectory.forward.s < 100.0


class TestFlatFactorClosedForm:
    @pytest.mark.parametrize("base_velocity", [[0.3, -0.3, 0.2], [0.3, -0.29, 0.2]], ids=["c1-zero", "c1-small"])
    def test_matches_numerics(self, null_fiber, base_velocity):
        init = _state(np.zeros(6), list(base_velocity) + list(FIBER_VELOCITY))
        trajectory = integrate_geodesic(null_fiber, init, 100.0, tol=1e-12, system="flat-factor")
        assert not trajectory.early
        for end in (trajectory.samples[0], trajectory.samples[-1]):
            expected = exponential_warp_closed_form(null_fiber, init, end.s)
            np.testing.assert_allclose(end.position, expected, rtol=1e-8, atol=1e-8)
        assert trajectory.max_drift <= 1e-8 * fiber_invariant(null_fiber, init)


class TestProbe:
    def test_initial_states_are_seeded(self, null_base):
        first = initial_states(null_base, "generic", 6, seed=7)
        second = initial_states(null_base, "generic", 6, seed=7)
        for a, b in zip(first, second):
            np.testing.assert_array_equal(a.as_array(), b.as_array())

    def test_generic_causal_targets(self, null_base):
        targets = ["null", "timelike", "spacelike"]
        for i, state in enumerate(initial_states(null_base, "generic", 6, seed=3)):
            G, _ = metric_with_partials(null_base, state.position)
            assert causal_kind(G, state.velocity) == targets[i % 3]
            assert np.linalg.norm(state.velocity) == pytest.approx(1.0)

    def test_transverse_sampler(self, null_fiber):
        for state in initial_states(null_fiber, "transverse", 6, seed=1):
            xi_rate = null_fiber.alpha.vector @ state.velocity[:3]
            zeta_rate = null_fiber.beta.vector @ state.velocity[3:]
            assert abs(xi_rate) <= 1e-12 and abs(zeta_rate) <= 1e-12

    def test_transverse_null_fiber_reaches_s_max(self, null_fiber):
        summary = completeness_probe(null_fiber, sampler="transverse", count=12, s_max=100.0, seed=0)
        assert summary.early_terminations == 0
        assert summary.termination_counts == {"reached-s-max": 24}
        assert summary.bound_holds is True
        assert summary.max_drift <= 1e-5
        assert summary.causal_achieved["timelike"] == 0
        assert "the transverse subspace contains no timelike vectors" in summary.notes
        assert summary.statement.startswith("no finite-parameter obstruction detected up to s_max=100")

    def test_generic_null_fiber_terminates_early(self, null_fiber):
        summary = completeness_probe(null_fiber, sampler="generic", count=3, s_max=100.0, seed=0)
        assert summary.early_terminations == 3
        assert summary.statement.startswith("finite-parameter obstruction detected in 3 of 3")

    def test_singular_warp_is_detected(self):
        summary = completeness_probe(gallery("singular-warp"), count=3, s_max=100.0, seed=0)
        assert summary.early_terminations >= 1

    def test_flat_product(self, flat):
        summary = completeness_probe(flat, count=6, s_max=100.0, seed=0)
        assert summary.early_terminations == 0
        assert summary.bound_ratio is None and summary.bound_holds is None
        assert summary.to_json()["schema"] == "probe-v1"

    def test_threads_give_identical_summary(self, flat):
        serial = completeness_probe(flat, count=3, s_max=10.0, seed=5)
        threaded = completeness_probe(flat, count=3, s_max=10.0, seed=5, workers=3)
        assert threaded.to_json() == serial.to_json()

    def test_rejects_empty_batch(self, flat):
        with pytest.raises(ValueError):
            completeness_probe(flat, count=0)
