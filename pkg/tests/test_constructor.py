import math

import numpy as np
import pytest

from constructor import (
    CaseParams,
    ZMode,
    construct,
    construct_case1,
    construct_case2,
    construct_case3_variable_z,
    construct_case4,
    gallery,
    harmonic_fiber_map,
    integrate_psi_z,
    power_law_slope,
)
from core.errors import ConfigError, ConstructionError
from core.profiles import Profile
from soliton import reduced_residuals_fiber

XI = np.linspace(-2.0, 2.0, 11)


def _residuals(candidate, xs, zs):
    return np.array([reduced_residuals_fiber(candidate, x, z) for x, z in zip(xs, zs)])


class TestCaseParams:
    def test_norms_and_factors(self):
        params = CaseParams(case_id=2, n=3, m=4)
        assert (params.alpha_norm_sq, params.beta_norm_sq) == (0, 1)
        assert params.base_factor().signature == (-1, 1, 1)
        assert params.fiber_factor().signature == (1, 1, 1, 1)
        assert params.alpha().is_null
        assert not params.beta().is_null

    @pytest.mark.parametrize("changes", [
        {"case_id": 5},
        {"m": 2},
        {"theta": 0.0},
        {"sign": "x"},
        {"exponents": "other"},
        {"xi_span": (1.0, 1.0)},
    ])
    def test_rejects_invalid_values(self, changes):
        values = {"case_id": 1, "n": 3, "m": 3}
        values.update(changes)
        with pytest.raises(ConstructionError):
            CaseParams(**values)

    def test_case_specific_checks(self):
        with pytest.raises(ConstructionError):
            CaseParams(case_id=2, n=3, m=3, c2=0.0)
        with pytest.raises(ConstructionError):
            CaseParams(case_id=3, n=2, m=3, c5=-1.0)

    def test_null_direction_needs_two_dimensions(self):
        with pytest.raises(ConstructionError, match="dimension"):
            CaseParams(case_id=1, n=1, m=3).alpha()

    def test_signature_must_match_case(self):
        params = CaseParams(case_id=1, n=2, m=3, base_signature=(1, 1))
        with pytest.raises(ConstructionError, match="expected 0"):
            params.alpha()

    def test_json_document(self):
        params = CaseParams(case_id=3, n=2, m=3, z_mode=ZMode.VARIABLE, xi_span=(0.0, 5.0))
        doc = params.to_json()
        assert doc["schema"] == "caseparams-v1"
        assert doc["z_mode"] == "variable"
        assert doc["xi_span"] == [0.0, 5.0]
        assert CaseParams.from_json(doc) == params

    def test_json_errors(self):
        with pytest.raises(ConfigError, match="Unknown case parameters"):
            CaseParams.from_json({"case_id": 1, "n": 3, "m": 3, "c99": 1.0})
        with pytest.raises(ConfigError, match="schema"):
            CaseParams.from_json({"schema": "caseparams-v0", "case_id": 1, "n": 3, "m": 3})
        with pytest.raises(ConfigError):
            CaseParams.from_json({"case_id": 3, "n": 2, "m": 3, "z_mode": "sometimes"})


class TestCase1:
    def test_reduced_system(self):
        candidate = construct_case1(CaseParams(case_id=1, n=3, m=3, theta=2.0))
        zs = np.linspace(-2.0, 2.0, 11)
        assert np.max(np.abs(_residuals(candidate, XI, zs))) <= 1e-9
        assert candidate.label == "case1"

    def test_potential_constants(self):
        candidate = construct_case1(CaseParams(case_id=1, n=3, m=3, h1=0.3, h2=-0.2))
        jet = candidate.h.eval(0.0)
        assert jet.value == pytest.approx(-0.2, abs=1e-12)
        assert jet.d1 == pytest.approx(0.3, abs=1e-10)

    def test_negative_radicand(self):
        zeta = Profile.identity("zeta")
        params = CaseParams(case_id=1, n=3, m=3, zeta_span=(-1.0, 1.0))
        with pytest.raises(ConstructionError, match="radicand"):
            harmonic_fiber_map(3.0 - zeta ** 2, params)

    def test_wrong_case(self):
        with pytest.raises(ConstructionError, match="not case 1"):
            construct_case1(CaseParams(case_id=2, n=3, m=3))


class TestCase2:
    @pytest.mark.parametrize("m", [3, 4, 5])
    @pytest.mark.parametrize("theta", [1.0, 2.0])
    def test_fiber_equations(self, m, theta):
        params = CaseParams(case_id=2, n=3, m=m, theta=theta, c1=1.0, c2=1.5, c3=0.2)
        candidate = construct_case2(params)
        zs = np.linspace(-1.0 / (m - 2) + 0.1, 5.0, 11)
        rows = _residuals(candidate, XI, zs)
        assert np.max(np.abs(rows[:, 2:])) <= 1e-9

    def test_base_equations(self):
        candidate = construct_case2(CaseParams(case_id=2, n=3, m=4, sign="-"))
        zs = np.linspace(0.0, 3.0, 11)
        rows = _residuals(candidate, XI, zs)
        assert np.max(np.abs(rows[:, :2])) <= 1e-9

    def test_fiber_domain(self):
        candidate = construct_case2(CaseParams(case_id=2, n=3, m=4, c1=2.0))
        assert candidate.tau.domain[0] == pytest.approx(-1.0)


class TestCase3:
    def test_power_law_matches_closed_form(self):
        b = 2.0
        candidate = gallery("1.10", {"b": b, "c4": 1.5, "c5": 0.5})
        for x in np.linspace(-b + 0.5, -b + 10.0, 7):
            w = x + b
            assert candidate.phi(x) == pytest.approx(0.5 / w, rel=1e-12)
            assert candidate.f(x) == pytest.approx(1.5 / w, rel=1e-12)
            assert candidate.h(x) == pytest.approx(-4.0 * math.log(w), abs=1e-12)
        assert candidate.tau(0.7) == pytest.approx(math.exp(1.05), rel=1e-12)
        assert candidate.u(0.7) == pytest.approx(1.05, rel=1e-12)

    def test_power_law_equations(self):
        b = 2.0
        candidate = gallery("1.10", {"b": b, "c4": 1.5, "c5": 0.5})
        xs = np.linspace(-b + 0.5, -b + 10.0, 21)
        rows = _residuals(candidate, xs, np.linspace(-2.0, 2.0, 21))
        assert np.max(np.abs(rows[:, :3])) <= 1e-10

    def test_slope_branches(self):
        params = CaseParams(case_id=3, n=2, m=3, k=1.0)
        assert power_law_slope(params) == pytest.approx(1.0)
        assert power_law_slope(params.with_changes(branch="-")) == pytest.approx(-3.0)

    def test_degenerate_slope(self):
        params = CaseParams(case_id=3, n=1, m=3, k=math.sqrt(3.0))
        with pytest.raises(ConstructionError, match="degenerate"):
            power_law_slope(params)

    def test_variable_z_equations(self):
        params = CaseParams(case_id=3, n=2, m=3, k=1.0, c6=0.1, z0=3.0,
                            z_mode=ZMode.VARIABLE, xi_span=(0.0, 5.0))
        candidate = construct(params)
        assert candidate.label == "case3-variable-z"
        xs = np.linspace(0.1, 4.9, 13)
        rows = _residuals(candidate, xs, np.linspace(-1.0, 1.0, 13))
        assert np.max(np.abs(rows[:, :3])) <= 1e-6
        assert not candidate.is_closed_form

    def test_variable_z_span_and_tolerances(self):
        params = CaseParams(case_id=3, n=2, m=3, k=1.0, c6=0.1, z0=3.0,
                            z_mode=ZMode.VARIABLE, xi_span=(0.0, 5.0))
        candidate = construct_case3_variable_z(params, xi_span=(0.0, 2.0), rtol=1e-9, atol=1e-11)
        assert tuple(candidate.f.domain) == (0.0, 2.0)
        xs = np.linspace(0.1, 1.9, 7)
        rows = _residuals(candidate, xs, np.linspace(-1.0, 1.0, 7))
        assert np.max(np.abs(rows[:, :3])) <= 1e-6


class TestPsiZ:
    PARAMS = dict(case_id=3, n=2, m=3, k=1.0, c6=0.1, z0=3.0, z_mode=ZMode.VARIABLE, xi_span=(0.0, 5.0))

    def test_derived_exponents_are_consistent(self):
        solution = integrate_psi_z(CaseParams(**self.PARAMS))
        assert solution.psi_deviation < 1e-7
        z_end = solution.state(5.0)[0]
        assert 1.0 < z_end < 3.0

    def test_printed_exponents_drift(self):
        solution = integrate_psi_z(CaseParams(exponents="printed", **self.PARAMS))
        assert solution.psi_deviation > 1e-6
        assert solution.stopped_at is not None
        assert 0.0 < solution.stopped_at < 5.0
        assert solution.xi_span == (0.0, solution.stopped_at)

    def test_derived_exponents_reach_the_end(self):
        solution = integrate_psi_z(CaseParams(**self.PARAMS))
        assert solution.stopped_at is None
        assert solution.xi_span == (0.0, 5.0)

    def test_complex_power(self):
        params = CaseParams(**dict(self.PARAMS, z0=0.5))
        with pytest.raises(ConstructionError, match="complex power"):
            integrate_psi_z(params)


class TestCase4:
    def test_constant_z(self):
        candidate = construct_case4(CaseParams(case_id=4, n=2, m=3, k=1.0, b=1.0))
        xs = np.linspace(-0.5, 3.0, 11)
        zs = np.linspace(-0.5, 3.0, 11)
        assert np.max(np.abs(_residuals(candidate, xs, zs))) <= 1e-9
        assert candidate.label == "case4-constant-z"
        assert not candidate.alpha.is_null and not candidate.beta.is_null

    def test_dispatch(self):
        assert construct(CaseParams(case_id=2, n=3, m=3)).label == "case2"
        with pytest.raises(ConstructionError):
            construct_case4(CaseParams(case_id=3, n=2, m=3))
