"""Quasi-steady dynamics ``h' = f(h)`` and equilibria as zeros of ``f``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .bvp import GrowthRate
from .errors import InvalidInputError, NoEquilibriumError
from .model import Model

__all__ = ["Trajectory", "integrate_quasisteady", "find_equilibrium_ode", "persistence_barrier"]


@dataclass
class Trajectory:
    """Heights (and optionally profiles) at the integrator's output times."""

    times: np.ndarray
    heights: np.ndarray
    growth_bound: float
    profiles: list | None = None
    status: str = "completed"
    evaluations: int = 0

    def envelope_violations(self, slack: float = 1e-9) -> int:
        m, t, h = self.growth_bound, self.times, self.heights
        h0 = h[0]
        bad = (h < np.exp(-m * t) * h0 * (1 - slack)) | (h > np.exp(m * t) * h0 * (1 + slack)) | (h <= 0)
        return int(np.count_nonzero(bad))


def integrate_quasisteady(
    h0: float,
    t_end: float,
    model: Model,
    *,
    rtol: float = 1e-8,
    atol: float = 1e-12,
    n: int = 128,
    extrapolate: bool = True,
    h_floor: float = 1e-12,
    t_eval=None,
    store_profiles: bool = False,
    max_step: float = math.inf,
) -> Trajectory:
    """Integrate ``h' = f(h)`` with the Dormand-Prince 5(4) pair.

    The integrated variable is ``log h`` (right-hand side ``f(h) / h``, which
    is bounded by the growth bound), so stages can never produce ``h <= 0``
    and ``rtol`` acts as a relative tolerance on ``h``.  Each right-hand-side
    evaluation re-solves the fixed-height problem, warm-started from the
    previous profile.  Reaching ``h_floor`` ends the run with
    ``status="extinct"``; that is a stopping rule, not an error.  With
    ``store_profiles`` the returned profiles are ``BvpSolution`` objects at
    the output times.
    """
    h0 = float(h0)
    if not (math.isfinite(h0) and h0 > 0.0):
        raise InvalidInputError(f"h0 must be positive, got {h0!r}")
    if not (math.isfinite(t_end) and t_end > 0.0):
        raise InvalidInputError(f"t_end must be positive, got {t_end!r}")
    f = GrowthRate(model, n=n, extrapolate=extrapolate)
    log_floor = math.log(h_floor)

    def rhs(_t, state):
        h = math.exp(state[0])
        return [f(h) / h]

    def extinct(_t, state):
        return state[0] - log_floor

    extinct.terminal = True
    extinct.direction = -1

    sol = solve_ivp(
        rhs, (0.0, t_end), [math.log(h0)], method="RK45", rtol=rtol, atol=atol, events=extinct,
        t_eval=t_eval, max_step=max_step,
    )
    if sol.status == -1:
        raise RuntimeError(f"quasi-steady integration failed: {sol.message}")
    times, log_h = sol.t, sol.y[0]
    status = "extinct" if sol.status == 1 else "completed"
    if status == "extinct" and (times.size == 0 or times[-1] < sol.t_events[0][0]):
        times = np.append(times, sol.t_events[0][0])
        log_h = np.append(log_h, sol.y_events[0][0][0])
    heights = np.exp(log_h)
    traj = Trajectory(
        times=times, heights=heights, growth_bound=model.growth_bound, status=status, evaluations=f.evaluations
    )
    if store_profiles:
        traj.profiles = [f.solve(h) for h in heights]
    return traj


def _auto_bracket(f, start, h_floor, h_max):
    lo = hi = start
    f_lo = f_hi = f(start)
    while f_lo <= 0.0 and lo > h_floor:
        hi, f_hi = lo, f_lo
        lo = lo / 2.0
        f_lo = f(lo)
    while f_hi >= 0.0 and hi < h_max:
        lo, f_lo = hi, f_hi
        hi = hi * 2.0
        f_hi = f(hi)
    if f_lo > 0.0 and f_hi < 0.0:
        return lo, hi
    raise NoEquilibriumError(f"f(h) has no sign change on [{h_floor:g}, {h_max:g}]")


def find_equilibrium_ode(
    model: Model,
    bracket: tuple[float, float] | None = None,
    *,
    n: int = 256,
    extrapolate: bool = True,
    h_floor: float = 1e-6,
    h_max: float = 1e4,
    rtol: float = 1e-12,
) -> float:
    """Root ``h_e`` of ``f`` by Brent's method.

    Without a bracket, one is grown by halving/doubling from the natural
    length scale ``sqrt(kappa / max r')`` (for affine ``g`` the contact
    height ``kappa_L c* / (L b)`` is an upper bound and is used instead).
    Raises :class:`NoEquilibriumError` when no sign change is found, which
    is the expected outcome when ``g(r(c*)) <= 0``.
    """
    f = GrowthRate(model, n=n, extrapolate=extrapolate)
    p = model.params
    if float(model.growth(model.r_top)) <= 0.0 and model.growth.kind == "affine":
        raise NoEquilibriumError(f"g(r(c*)) = {float(model.growth(model.r_top)):.6g} <= 0: no equilibrium")
    if bracket is None:
        if model.growth.kind == "affine":
            start = p.kappa_L * p.c_star / (p.L * model.growth.b)
        else:
            lip = float(np.max(model.dr(np.linspace(0.0, p.c_star, 101))))
            start = math.sqrt(p.kappa / lip) if lip > 0 else 1.0
        lo, hi = _auto_bracket(f, start, h_floor, h_max)
    else:
        lo, hi = map(float, bracket)
        if f(lo) * f(hi) >= 0.0:
            raise NoEquilibriumError(f"f does not change sign on [{lo:g}, {hi:g}]")
    return brentq(f, lo, hi, xtol=1e-15, rtol=rtol, maxiter=200)


def persistence_barrier(model: Model) -> float:
    """Height below which ``f > 0`` is guaranteed for affine ``g``.

    Largest ``z`` with ``c* - (L z / kappa_L) r(c*) - (z**2 / kappa) r(c*)``
    still above the subsistence concentration: below it every profile
    value exceeds the concentration where ``r = b``.
    """
    from .shooting import subsistence_concentration

    p = model.params
    c_low = subsistence_concentration(model)
    a = model.r_top / p.kappa
    b = p.L * model.r_top / p.kappa_L
    gap = p.c_star - c_low
    return (-b + math.sqrt(b * b + 4 * a * gap)) / (2 * a)
