import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from biofilm1d import DomainError, GrowthModel, InvalidInputError, Model, NoEquilibriumError, RateModel
from biofilm1d import find_equilibrium_shooting, monotonicity_certificate, shoot
from biofilm1d.shooting import (
    contact_height,
    equilibrium_residual,
    monotonicity_function,
    subsistence_concentration,
)

from oracles import LINEAR_EQ_C0, LINEAR_EQ_H, TANH_EQ_C0, TANH_EQ_H


def test_tanh_equilibrium_matches_oracle(fig1):
    eq = find_equilibrium_shooting(fig1, certify=False)
    assert eq.h_e == pytest.approx(TANH_EQ_H, rel=1e-10)
    assert eq.c0_e == pytest.approx(TANH_EQ_C0, rel=1e-9)
    assert abs(eq.A_residual) < 1e-12 and abs(eq.B_residual) < 1e-12


def test_linear_equilibrium_matches_oracle(linear_model):
    eq = find_equilibrium_shooting(linear_model, certify=False)
    assert eq.h_e == pytest.approx(LINEAR_EQ_H, rel=1e-10)
    assert eq.c0_e == pytest.approx(LINEAR_EQ_C0, rel=1e-9)
    # closed-form profile c0 cosh(z)
    z = eq.profile.y * eq.h_e
    assert np.allclose(eq.profile.values, LINEAR_EQ_C0 * np.cosh(z), atol=1e-10)


def test_certificate(fig1):
    cert = monotonicity_certificate(fig1, n_samples=16)
    assert cert.unique, cert.violations
    assert np.all(np.diff(cert.B) > 0)
    assert np.all(cert.M_min > 0)
    assert cert.summary().startswith("unique")


def test_subsistence_concentration(fig1):
    c_low = subsistence_concentration(fig1)
    assert 2 * np.tanh(c_low) == pytest.approx(0.5, abs=1e-14)


def test_zero_start_stays_zero(fig1):
    state = shoot(0.0, fig1)
    assert np.all(state.c == 0.0)
    assert contact_height(0.0, fig1) == pytest.approx(1.0 / 0.5)


@pytest.mark.parametrize("c0", [0.0, 0.05, 0.2, 0.9])
def test_shot_invariants(fig1, c0):
    state = shoot(c0, fig1)
    assert state.invariant_violations() == []
    assert state.z_grid[-1] > 0


@pytest.mark.parametrize("c0", [0.02, 0.1, 0.2])
@pytest.mark.parametrize("z", [0.3, 1.0, 1.7])
def test_sensitivity_matches_difference(fig1, c0, z):
    delta = 1e-5
    up = shoot(c0 + delta, fig1, z_max=2.0)(z)[0]
    down = shoot(c0 - delta, fig1, z_max=2.0)(z)[0]
    w = shoot(c0, fig1, z_max=2.0)(z)[2]
    assert w == pytest.approx((up - down) / (2 * delta), rel=1e-6)


@pytest.mark.parametrize("c0", [0.05, 0.15, 0.25])
def test_contact_height_derivative_identity(fig1, c0):
    # implicit differentiation of c(h(c0), c0) + (L b / kappa_L) h(c0) = c*
    h = contact_height(c0, fig1)
    c, cz, w, _ = shoot(c0, fig1)(h)
    predicted = -w / (cz + 0.5)
    delta = 1e-6
    fd = (contact_height(c0 + delta, fig1) - contact_height(c0 - delta, fig1)) / (2 * delta)
    assert fd == pytest.approx(predicted, rel=1e-5)


def test_monotonicity_function_positive_after_origin(fig1):
    state = shoot(0.1, fig1)
    h = contact_height(0.1, fig1)
    m = monotonicity_function(np.linspace(0, h, 50), state, fig1)
    assert np.all(m[1:] > 0) and np.all(np.diff(m) >= -1e-12)


@given(a=st.floats(0.0, 0.25), b=st.floats(0.0, 0.25))
@settings(max_examples=15, deadline=None)
def test_residual_increasing_in_c0(fig1, a, b):
    if abs(a - b) < 1e-6:
        return
    lo, hi = sorted((a, b))
    assert equilibrium_residual(lo, fig1) < equilibrium_residual(hi, fig1)


def test_washout_has_no_equilibrium(washout):
    with pytest.raises(NoEquilibriumError):
        find_equilibrium_shooting(washout)
    with pytest.raises(DomainError):
        equilibrium_residual(0.1, washout)


def test_requires_affine_growth():
    with pytest.raises(DomainError):
        find_equilibrium_shooting(Model(growth=GrowthModel.constant(1.0)))


def test_requires_increasing_rate():
    model = Model(rate=RateModel.tabulated([0, 0.5, 1, 2, 3], [0, 1, 1, 1.5, 2]), growth=GrowthModel.affine(1, 0.5))
    with pytest.raises(DomainError):
        find_equilibrium_shooting(model, certify=False)


def test_rejects_negative_start(fig1):
    with pytest.raises(InvalidInputError):
        shoot(-0.1, fig1)
