"""Equilibria for affine growth by shooting from the substratum.

For ``g(s) = alpha (s - b)`` an equilibrium is a pair ``(h, c)`` with

    kappa c'' = r(c),  c'(0) = 0,  c(h) = c* - (L b / kappa_L) h,  c'(h) = (b / kappa) h.

Shooting integrates ``kappa c'' = r(c)``, ``c(0) = c0``, ``c'(0) = 0``
together with its sensitivity ``w = dc/dc0``.  The contact height ``h(c0)``
is where ``A(z) = c + (L b / kappa_L) z - c*`` first vanishes, and the
equilibrium is the zero of ``c0 -> B(h(c0), c0)`` with
``B(z) = c'(z) - (b / kappa) z``.  The quantity

    M(z, c0) = (L b / kappa_L + c'(z)) w'(z) - (r(c(z)) - b) w(z) / kappa

is positive along every shot with ``r(c0) <= b``, which makes
``B(h(.), .)`` strictly increasing and the equilibrium unique; the
certificate here samples exactly that.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .errors import DomainError, InvalidInputError, NoEquilibriumError
from .model import Model, Profile, uniform_grid

__all__ = [
    "ShootState",
    "Certificate",
    "EquilibriumResult",
    "shoot",
    "contact_height",
    "equilibrium_residual",
    "subsistence_concentration",
    "monotonicity_function",
    "monotonicity_certificate",
    "find_equilibrium_shooting",
]

RTOL = 1e-12
ATOL = 1e-14


@dataclass(frozen=True)
class ShootState:
    """Solution of the augmented initial value problem on ``[0, z_grid[-1]]``."""

    c0: float
    z_grid: np.ndarray
    c: np.ndarray
    c_z: np.ndarray
    w: np.ndarray
    w_z: np.ndarray
    dense: object = field(repr=False)

    def __call__(self, z):
        """``(c, c_z, w, w_z)`` at ``z`` from the dense output."""
        return self.dense(z)

    def invariant_violations(self, slack: float = 1e-10) -> list[str]:
        out = []
        scale = max(1.0, float(np.max(np.abs(self.c_z))))
        if np.any(np.diff(self.c) < -slack):
            out.append("c non-decreasing")
        if np.any(np.diff(self.c_z) < -slack * scale):
            out.append("c_z non-decreasing")
        if np.any(self.w < 1.0 - slack):
            out.append("w >= 1")
        if np.any(self.w_z < -slack):
            out.append("w_z >= 0")
        if self.c0 == 0.0 and np.any(self.c != 0.0):
            out.append("c(., 0) == 0")
        return out


def _affine_b(model: Model) -> float:
    if model.growth.kind != "affine":
        raise DomainError("shooting needs affine growth g(s) = alpha (s - b)")
    return model.growth.b


def shoot(c0: float, model: Model, *, z_max: float | None = None, rtol: float = RTOL, atol: float = ATOL) -> ShootState:
    """Integrate ``(c, c_z, w, w_z)`` from ``z = 0`` with ``c(0) = c0``.

    Without ``z_max`` the domain starts at the ``c0 = 0`` contact height
    ``kappa_L c* / (L b)`` and doubles until ``A(z_max, c0) > 0``.
    """
    c0 = float(c0)
    if not np.isfinite(c0) or c0 < 0.0:
        raise InvalidInputError(f"c0 must be a non-negative number, got {c0!r}")
    p = model.params
    kappa = p.kappa

    def rhs(_z, s):
        c, cz, w, wz = s
        return [cz, float(model.r(c)) / kappa, wz, float(model.dr(c)) * w / kappa]

    fixed = z_max is not None
    if not fixed:
        b = _affine_b(model)
        slope = p.L * b / p.kappa_L
        z_max = p.c_star / slope
    while True:
        sol = solve_ivp(rhs, (0.0, z_max), [c0, 0.0, 1.0, 0.0], method="DOP853", rtol=rtol, atol=atol,
                        dense_output=True)
        if not sol.success:
            raise RuntimeError(f"shooting integration failed: {sol.message}")
        if fixed or sol.y[0, -1] + slope * z_max - p.c_star >= 0.0:
            break
        z_max *= 2.0
    c, cz, w, wz = sol.y
    return ShootState(c0=c0, z_grid=sol.t, c=c, c_z=cz, w=w, w_z=wz, dense=sol.sol)


def _contact(c0, model):
    p = model.params
    if not 0.0 <= c0 < p.c_star:
        raise DomainError(f"contact height needs c0 in [0, c*), got {c0!r}")
    slope = p.L * _affine_b(model) / p.kappa_L
    state = shoot(c0, model)

    def A(z):
        return state(z)[0] + slope * z - p.c_star

    z_end = state.z_grid[-1]
    if A(z_end) == 0.0:
        return float(z_end), state
    h = brentq(A, 0.0, z_end, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    return h, state


def contact_height(c0: float, model: Model) -> float:
    """Unique ``h(c0) > 0`` with ``A(h(c0), c0) = 0``."""
    return _contact(c0, model)[0]


def subsistence_concentration(model: Model) -> float:
    """The concentration ``c_low`` in ``(0, c*)`` with ``r(c_low) = b``."""
    b = _affine_b(model)
    if model.r_top <= b:
        raise DomainError(f"r(c*) = {model.r_top:.6g} <= b = {b:.6g}: no subsistence concentration in (0, c*)")
    return brentq(lambda s: float(model.rate(s)) - b, 0.0, model.c_star, xtol=1e-15, rtol=1e-15)


def _residual_from(h, state, model):
    return float(state(h)[1]) - model.growth.b / model.params.kappa * h


def equilibrium_residual(c0: float, model: Model) -> float:
    """``B(h(c0), c0)``; zero exactly at the equilibrium's center value."""
    if model.r_top <= _affine_b(model):
        raise DomainError("equilibrium regime requires r(c*) > b")
    h, state = _contact(float(c0), model)
    return _residual_from(h, state, model)


def monotonicity_function(z, state: ShootState, model: Model) -> np.ndarray:
    """``M(z, c0)`` along a shot."""
    p = model.params
    b = _affine_b(model)
    c, cz, w, wz = state(np.asarray(z, dtype=float))
    return (p.L * b / p.kappa_L + cz) * wz - (model.r(c) - b) * w / p.kappa


@dataclass
class Certificate:
    """Sampled evidence that the equilibrium is unique."""

    c0: np.ndarray
    heights: np.ndarray
    B: np.ndarray
    M_min: np.ndarray
    violations: list
    unique: bool

    def summary(self) -> str:
        if self.unique:
            return f"unique: B increasing on {self.c0.size} samples, min M(z>0) = {self.M_min.min():.3e}"
        return "NOT certified: " + "; ".join(self.violations[:5])


def monotonicity_certificate(
    model: Model, c0_grid=None, *, n_samples: int = 64, n_z: int = 200, slack: float = 1e-12
) -> Certificate:
    """Sample ``B(h(c0), c0)`` and ``M(z, c0)`` over ``c0`` in ``[0, c_low]``.

    Checks that ``M > 0`` for ``z > 0``, that ``M`` is non-decreasing in
    ``z``, that every shot keeps ``c, c_z`` non-decreasing, ``w >= 1`` and
    ``w_z >= 0``, and that the sampled ``B`` values strictly increase.
    """
    if model.r_top <= _affine_b(model):
        raise DomainError("monotonicity certificate requires r(c*) > b")
    if c0_grid is None:
        c0_grid = np.linspace(0.0, subsistence_concentration(model), n_samples)
    c0_grid = np.asarray(c0_grid, dtype=float)
    scale = model.params.kappa_L * model.c_star / (model.params.L * model.params.kappa)
    heights, B, m_min, bad = [], [], [], []
    for c0 in c0_grid:
        h, state = _contact(c0, model)
        z = np.linspace(0.0, h, n_z + 1)
        M = monotonicity_function(z, state, model)
        heights.append(h)
        B.append(_residual_from(h, state, model))
        m_min.append(float(M[1:].min()))
        if np.any(M[1:] <= 0.0):
            bad.append(f"M <= 0 at c0={c0:.6g}")
        if np.any(np.diff(M) < -slack * scale):
            bad.append(f"M decreasing at c0={c0:.6g}")
        bad.extend(f"{v} at c0={c0:.6g}" for v in state.invariant_violations())
    B = np.array(B)
    if np.any(np.diff(B) <= 0.0):
        i = int(np.argmin(np.diff(B)))
        bad.append(f"B not increasing between c0={c0_grid[i]:.6g} and {c0_grid[i + 1]:.6g}")
    return Certificate(
        c0=c0_grid, heights=np.array(heights), B=B, M_min=np.array(m_min), violations=bad, unique=not bad
    )


@dataclass
class EquilibriumResult:
    h_e: float
    c0_e: float
    profile: Profile
    state: ShootState = field(repr=False)
    A_residual: float
    B_residual: float
    certificate: Certificate | None = None

    @property
    def unique(self) -> bool:
        return bool(self.certificate and self.certificate.unique)


def find_equilibrium_shooting(
    model: Model, *, certify: bool = True, n_profile: int = 256, n_samples: int = 64
) -> EquilibriumResult:
    """Locate the unique equilibrium for affine ``g`` with ``r(c*) > b``.

    Brent's method on ``c0 -> B(h(c0), c0)`` over ``[0, c_low]``; the
    returned profile is ``c(y h_e)`` on ``n_profile`` cells.
    """
    b = _affine_b(model)
    if model.r_top <= b:
        raise NoEquilibriumError(f"r(c*) = {model.r_top:.6g} <= b = {b:.6g}: no equilibrium")
    p = model.params
    s = np.linspace(0.0, p.c_star, 1002)
    if np.any(model.rate.derivative(s) <= 0.0):
        raise DomainError("shooting requires r' > 0 on [0, c*]")
    c_low = subsistence_concentration(model)
    c0_e = brentq(lambda c0: equilibrium_residual(c0, model), 0.0, c_low, xtol=1e-16, rtol=1e-14, maxiter=200)
    h_e, state = _contact(c0_e, model)
    c_e = state(uniform_grid(n_profile) * h_e)[0]
    A_res = float(state(h_e)[0]) + p.L * b / p.kappa_L * h_e - p.c_star
    cert = monotonicity_certificate(model, n_samples=n_samples) if certify else None
    return EquilibriumResult(
        h_e=h_e,
        c0_e=c0_e,
        profile=Profile(c_e),
        state=state,
        A_residual=A_res,
        B_residual=_residual_from(h_e, state, model),
        certificate=cert,
    )
