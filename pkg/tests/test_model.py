import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from biofilm1d import DomainError, GrowthModel, InvalidInputError, PhysicalParams, Profile, RateModel, validate
from biofilm1d.model import cumtrapz, growth_integral, uniform_grid

from conftest import tabulated_rate

positive = st.floats(min_value=1e-3, max_value=1e3, allow_nan=False)


@pytest.mark.parametrize("field", ["kappa", "kappa_L", "L", "c_star", "eps"])
@pytest.mark.parametrize("bad", [0.0, -1.0, math.nan, math.inf])
def test_params_reject_non_positive(field, bad):
    with pytest.raises(InvalidInputError):
        PhysicalParams(**{field: bad})


def test_robin_coefficient():
    p = PhysicalParams(kappa=0.5, kappa_L=2.0, L=3.0)
    assert p.robin_coefficient() == pytest.approx(3.0 * 0.5 / 2.0)


def test_rate_values():
    assert RateModel.tanh(2.0)(1.0) == pytest.approx(2 * math.tanh(1.0))
    assert RateModel.monod(3.0, 0.5)(1.0) == pytest.approx(2.0)
    assert RateModel.linear(1.5)(2.0) == pytest.approx(3.0)


@pytest.mark.parametrize("rate", [RateModel.tanh(2.0), RateModel.monod(1.0, 0.3), RateModel.linear(0.7)])
@given(s=st.floats(min_value=0.0, max_value=2.0))
def test_rate_derivative_matches_difference_quotient(rate, s):
    step = 1e-6
    fd = (rate(s + step) - rate(s - step)) / (2 * step)
    assert rate.derivative(s) == pytest.approx(fd, rel=1e-6, abs=1e-8)


def test_truncation_clamps_outside_range():
    r = RateModel.tanh(2.0)
    s = np.array([-1.0, 0.0, 0.5, 1.0, 3.0])
    out = r.truncated(s, 1.0)
    assert out[0] == 0.0
    assert out[-1] == pytest.approx(r(1.0))
    assert out[2] == pytest.approx(r(0.5))
    d = r.truncated_derivative(s, 1.0)
    assert d[0] == 0.0 and d[-1] == 0.0 and d[2] == pytest.approx(r.derivative(0.5))


def test_tabulated_rate_interpolates():
    rate = tabulated_rate()
    s = np.linspace(0.0, 1.0, 17)
    assert np.allclose(rate(s), 1.0 - np.exp(-3.0 * s), atol=1e-5)
    assert np.allclose(rate.derivative(s), 3.0 * np.exp(-3.0 * s), atol=2e-3)


@given(rho=positive)
def test_rate_spec_round_trip(rho):
    for rate in (RateModel.tanh(rho), RateModel.linear(rho), RateModel.monod(rho, 1.0 + rho)):
        assert RateModel.from_spec(rate.spec()) == rate


@given(alpha=positive, b=positive)
def test_growth_spec_round_trip(alpha, b):
    g = GrowthModel.affine(alpha, b)
    assert GrowthModel.from_spec(g.spec()) == g


@pytest.mark.parametrize("text", ["tanh", "tanh:x", "monod:1", "cubic:1", "linear:1:2", ""])
def test_malformed_rate_spec(text):
    with pytest.raises(InvalidInputError):
        RateModel.from_spec(text)


@pytest.mark.parametrize("text", ["affine:1", "const", "exp:1", "affine:a:b"])
def test_malformed_growth_spec(text):
    with pytest.raises(InvalidInputError):
        GrowthModel.from_spec(text)


def test_constant_growth():
    g = GrowthModel.from_spec("const:-1")
    assert np.all(g(np.linspace(0, 5, 11)) == -1.0)
    assert g.spec() == "const:-1.0"
    assert g.sup_norm(2.0) == 1.0
    assert g.lipschitz() == 0.0


def test_affine_growth_bounds():
    g = GrowthModel.affine(2.0, 0.5)
    assert g.alpha == 2.0 and g.b == 0.5
    assert g.sup_norm(3.0) == pytest.approx(5.0)
    assert g.lipschitz() == 2.0


def test_profile_is_read_only_and_sized():
    prof = Profile(np.linspace(0, 1, 17))
    with pytest.raises(ValueError):
        prof.values[0] = 1.0
    with pytest.raises(InvalidInputError):
        Profile(np.zeros(5))
    with pytest.raises(InvalidInputError):
        Profile([0.0] * 8 + [math.nan])


@given(a=st.floats(-5, 5), b=st.floats(-5, 5), c=st.floats(-5, 5))
@settings(max_examples=50)
def test_differences_exact_on_quadratics(a, b, c):
    prof = Profile.from_function(lambda y: a * y**2 + b * y + c, 16)
    assert np.allclose(prof.first_difference(), 2 * a * prof.y + b, atol=1e-9)
    assert np.allclose(prof.second_difference(), 2 * a, atol=1e-7)


def test_profile_norms_and_resample():
    prof = Profile.from_function(lambda y: y, 64)
    assert prof.integral() == pytest.approx(0.5)
    assert prof.l2_norm() == pytest.approx(math.sqrt(1 / 3), rel=1e-4)
    fine = prof.resample(128)
    assert fine.n == 128 and np.allclose(fine.values, fine.y)


def test_cumtrapz_starts_at_zero():
    out = cumtrapz(np.ones(11), 0.1)
    assert out[0] == 0.0 and out[-1] == pytest.approx(1.0)
    assert np.allclose(uniform_grid(4), [0, 0.25, 0.5, 0.75, 1.0])


def test_validate_reports_regimes():
    p = PhysicalParams()
    rep = validate(p, RateModel.tanh(2.0), GrowthModel.affine(1.0, 0.5))
    for name in ("rate_zero_at_origin", "rate_positive", "rate_strictly_increasing", "equilibrium_regime"):
        assert rep.passed(name)
    assert not rep.passed("growth_negative")
    rep.require("shooting")
    with pytest.raises(DomainError, match="growth_negative"):
        rep.require("extinction")
    washout = validate(p, RateModel.tanh(2.0), GrowthModel.affine(1.0, 2.0))
    washout.require("extinction")
    assert "equilibrium_regime" in washout.failures("shooting")


def test_validate_flags_bad_rates():
    p = PhysicalParams()
    shifted = RateModel.tabulated(np.linspace(0, 2, 9), np.linspace(0.1, 1.0, 9))
    assert not validate(p, shifted, GrowthModel.affine(1, 0.5)).passed("rate_zero_at_origin")
    flat = RateModel.linear(0.0)
    rep = validate(p, flat, GrowthModel.affine(1, 0.5))
    assert not rep.passed("rate_positive") and not rep.passed("rate_strictly_increasing")


def test_growth_integral_of_zero_deficit():
    rate, growth = RateModel.tanh(2.0), GrowthModel.affine(1.0, 0.5)
    v = Profile(np.zeros(17))
    assert growth_integral(v, rate, growth, 1.0) == pytest.approx(2 * math.tanh(1.0) - 0.5)
