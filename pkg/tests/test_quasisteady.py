import math

import numpy as np
import pytest

from biofilm1d import GrowthModel, InvalidInputError, Model, NoEquilibriumError, growth_rate_f
from biofilm1d import find_equilibrium_ode, integrate_quasisteady, persistence_barrier

from oracles import LINEAR_EQ_H, TANH_EQ_H


def test_ode_root_matches_oracle(fig1):
    assert find_equilibrium_ode(fig1) == pytest.approx(TANH_EQ_H, rel=1e-8)


def test_ode_root_linear_rate(linear_model):
    assert find_equilibrium_ode(linear_model) == pytest.approx(LINEAR_EQ_H, rel=1e-8)


def test_explicit_bracket(fig1):
    assert find_equilibrium_ode(fig1, (0.5, 2.0), n=64) == pytest.approx(TANH_EQ_H, rel=1e-6)
    with pytest.raises(NoEquilibriumError):
        find_equilibrium_ode(fig1, (2.0, 4.0), n=64)


def test_no_equilibrium_when_growth_negative(washout):
    with pytest.raises(NoEquilibriumError, match="no equilibrium"):
        find_equilibrium_ode(washout)


@pytest.mark.parametrize("factor", [0.5, 2.0])
def test_monotone_approach(fig1, factor):
    h0 = factor * TANH_EQ_H
    traj = integrate_quasisteady(h0, 15.0, fig1, n=64)
    steps = np.diff(traj.heights)
    assert np.all(np.sign(steps) == np.sign(TANH_EQ_H - h0))
    assert traj.envelope_violations() == 0
    assert abs(traj.heights[-1] - TANH_EQ_H) < abs(h0 - TANH_EQ_H) * 1e-2


def test_constant_decay_is_exponential():
    model = Model(growth=GrowthModel.constant(-1.0))
    t = np.linspace(0, 5, 11)
    traj = integrate_quasisteady(2.0, 5.0, model, n=32, t_eval=t, rtol=1e-10)
    assert np.allclose(traj.heights, 2.0 * np.exp(-t), rtol=1e-8)


def test_extinction_stops_at_floor(washout):
    traj = integrate_quasisteady(1.0, 100.0, washout, h_floor=1e-6, n=64)
    assert traj.status == "extinct"
    assert traj.heights[-1] == pytest.approx(1e-6, rel=1e-8)
    assert np.all(np.diff(traj.heights) < 0)
    # f(h)/h tends to g(r(c*)) so the tail decays at that rate
    rate = np.log(traj.heights[-2] / traj.heights[-1]) / (traj.times[-1] - traj.times[-2])
    assert rate == pytest.approx(-(2 * math.tanh(1) - 2), rel=1e-3)


def test_profiles_stored(fig1):
    traj = integrate_quasisteady(1.0, 1.0, fig1, n=32, t_eval=[0.0, 0.5, 1.0], store_profiles=True)
    assert len(traj.profiles) == 3
    assert [p.h for p in traj.profiles] == list(traj.heights)


@pytest.mark.parametrize("h0,t_end", [(0.0, 1.0), (-1.0, 1.0), (1.0, 0.0), (math.inf, 1.0)])
def test_rejects_bad_input(fig1, h0, t_end):
    with pytest.raises(InvalidInputError):
        integrate_quasisteady(h0, t_end, fig1)


def test_growth_positive_below_barrier(fig1):
    delta = persistence_barrier(fig1)
    assert 0 < delta < TANH_EQ_H
    for h in np.linspace(delta / 10, delta, 5):
        assert growth_rate_f(h, fig1, 64) > 0
