import math

import numpy as np
import pytest

from core.errors import ConfigError, ConstructionError, ProfileDomainError
from core.profiles import Profile, antiderivative, exp, jet_profile, log, sqrt


t = Profile.identity()


class TestJets:
    def test_exponential(self):
        out = exp(2 * t).eval(0.3)
        e = math.exp(0.6)
        assert out.value == pytest.approx(e, rel=1e-15)
        assert out.d1 == pytest.approx(2 * e, rel=1e-15)
        assert out.d2 == pytest.approx(4 * e, rel=1e-15)

    def test_square_root(self):
        out = sqrt(t).eval(4.0)
        assert out == pytest.approx((2.0, 0.25, -1.0 / 32.0), rel=1e-15)

    def test_quotient_and_product(self):
        p = (t ** 2 + 1.0) / (t + 2.0)
        value, d1, d2 = p.eval(1.0)
        assert value == pytest.approx(2.0 / 3.0, rel=1e-14)
        assert d1 == pytest.approx((2 * 1.0 * 3.0 - 2.0) / 9.0, rel=1e-14)
        # (t² + 1)/(t + 2) = t - 2 + 5/(t + 2)
        assert d2 == pytest.approx(10.0 / 27.0, rel=1e-14)

    def test_log_jet(self):
        value, d1, d2 = log(3 * t + 1.0).eval(1.0)
        assert value == pytest.approx(math.log(4.0))
        assert d1 == pytest.approx(0.75)
        assert d2 == pytest.approx(-9.0 / 16.0)

    def test_reciprocal_power(self):
        m = 3
        out = (t ** (1.0 / (2 - m))).eval(4.0)
        assert out == pytest.approx((0.25, -0.0625, 0.03125), rel=1e-15)


def _random_tree(rng, depth):
    if depth == 0 or rng.random() < 0.2:
        return t if rng.random() < 0.6 else Profile.constant(rng.uniform(0.5, 1.5))
    a = _random_tree(rng, depth - 1)
    op = rng.integers(7)
    if op == 0:
        return a + _random_tree(rng, depth - 1)
    if op == 1:
        return a * _random_tree(rng, depth - 1)
    if op == 2:
        return a / (_random_tree(rng, depth - 1) ** 2 + 1.0)
    if op == 3:
        return exp(0.3 * a)
    if op == 4:
        return log(a ** 2 + 1.0)
    if op == 5:
        return sqrt(a ** 2 + 1.0)
    return -a


def test_jets_match_central_differences():
    rng = np.random.default_rng(11)
    h = 1e-5
    for _ in range(100):
        p = _random_tree(rng, 3)
        for x in rng.uniform(-1.0, 1.0, 10):
            value, d1, d2 = p.eval(x)
            plus, minus = p.eval(x + h), p.eval(x - h)
            scale = max(1.0, abs(value), abs(d1), abs(d2))
            assert abs((plus.value - minus.value) / (2 * h) - d1) <= 1e-5 * scale
            assert abs((plus.d1 - minus.d1) / (2 * h) - d2) <= 1e-5 * scale


class TestFolding:
    def test_constants_collapse(self):
        p = Profile.constant(2.0) + 3.0
        assert p.is_constant
        assert p(0.0) == 5.0

    def test_neutral_elements(self):
        assert (t * 1.0).expr == t.expr
        assert (t + 0.0).expr == t.expr
        assert (t ** 1).expr == t.expr
        assert (t * 0.0).is_constant
        assert (t ** 0).is_constant

    def test_structural_derivative(self):
        p = t ** 3 - 2 * t
        assert p.derivative()(2.0) == pytest.approx(10.0)
        assert p.derivative().derivative()(2.0) == pytest.approx(12.0)


class TestDomains:
    def test_log_narrows(self):
        p = log(2 * t + 1.0)
        assert p.domain == (-0.5, math.inf)
        with pytest.raises(ProfileDomainError):
            p.eval(-1.0)

    def test_fractional_power_narrows_decreasing_base(self):
        p = (1.0 - t) ** 0.5
        assert p.domain == (-math.inf, 1.0)

    def test_restriction(self):
        p = exp(t).on(-1.0, 1.0)
        assert p.contains(0.5)
        assert not p.contains(1.0)
        with pytest.raises(ProfileDomainError):
            p.eval(2.0)

    def test_non_finite_value_is_a_domain_error(self):
        with pytest.raises(ProfileDomainError):
            exp(t ** 2).eval(40.0)

    def test_variables_do_not_mix(self):
        with pytest.raises(ProfileDomainError):
            Profile.identity("xi") + Profile.identity("zeta")

    def test_generic_variable_adopts_the_other(self):
        assert (Profile.identity("xi") + t).variable == "xi"


class TestAntiderivative:
    def test_value_and_jet(self):
        p = antiderivative(exp(t), ref=0.0, ref_value=1.0)
        value, d1, d2 = p.eval(1.0)
        assert value == pytest.approx(math.e, abs=1e-11)
        assert d1 == pytest.approx(math.e, rel=1e-15)
        assert d2 == pytest.approx(math.e, rel=1e-15)

    def test_nested(self):
        inner = antiderivative(2 * t, ref=0.0)
        outer = antiderivative(inner, ref=0.0)
        assert outer(1.5) == pytest.approx(1.5 ** 3 / 3.0, abs=1e-11)

    def test_cache_does_not_affect_equality(self):
        first = antiderivative(exp(t), ref=0.0)
        second = antiderivative(exp(t), ref=0.0)
        first(0.5)
        assert first.expr == second.expr
        assert hash(first.expr) == hash(second.expr)
        assert "_cache" not in repr(first.expr)

    def test_reference_outside_domain(self):
        with pytest.raises(ProfileDomainError):
            antiderivative(log(t), ref=-1.0)

    def test_not_closed_form(self):
        assert not antiderivative(exp(t)).is_closed_form
        assert exp(t).is_closed_form


class TestSerialization:
    def test_closed_form_reloads(self):
        p = (log(2 * t + 1.0) * exp(-t) + t ** 2.5).with_variable("xi")
        data = p.to_json()
        assert data["schema"] == "profile-v1"
        assert data["domain"] == [0.0, None]
        q = Profile.from_json(data)
        assert q.variable == "xi"
        for x in (0.25, 1.0, 3.0):
            assert q.eval(x) == pytest.approx(p.eval(x), rel=1e-15)

    def test_antiderivative_reloads(self):
        p = antiderivative(exp(t), ref=0.0, ref_value=1.0)
        q = Profile.from_json(p.to_json())
        assert not q.to_json()["portable_exact"]
        assert q(0.5) == pytest.approx(math.exp(0.5), abs=1e-11)

    def test_jet_nodes_do_not_reload(self):
        p = jet_profile(lambda x: (x, 1.0, 0.0), label="line")
        with pytest.raises(ConfigError):
            Profile.from_json(p.to_json())

    def test_jet_nodes_have_no_derivative(self):
        p = jet_profile(lambda x: (x, 1.0, 0.0), label="line")
        with pytest.raises(ConstructionError):
            p.derivative()
        assert p.eval(2.0) == (2.0, 1.0, 0.0)

    def test_unknown_op(self):
        with pytest.raises(ConfigError):
            Profile.from_json({"schema": "profile-v1", "domain": [None, None], "expr": {"op": "sin"}})


def test_vectorized_sampling_matches_jets():
    p = exp(-t ** 2)
    xs = np.linspace(-2, 2, 9)
    values = np.array([p(x) for x in xs])
    np.testing.assert_allclose(values, np.exp(-xs ** 2), rtol=1e-15)
