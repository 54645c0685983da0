"""Fixed-height elliptic sub-problem and the growth rate ``f(h)``.

For a fixed biofilm height ``h`` the scaled substrate profile ``u`` solves

    (kappa / h**2) u'' = r(u),  u'(0) = 0,  u(1) + (L kappa / (kappa_L h)) u'(1) = c*,

which is equivalent to the fixed point ``u = F(u)`` of the integral map

    F(u)(y) = c* - (L h / kappa_L) int_0^1 r(u) - (h**2 / kappa) int_y^1 int_0^eta r(u).

Both integrals are discretized by (cumulative) trapezoid sums on the
uniform grid, so the discrete fixed point is second-order accurate and has
an error expansion in even powers of the mesh width; :func:`growth_rate_f`
can Richardson-extrapolate on that basis.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import trapezoid

from .errors import ConvergenceError, InvalidInputError
from .model import Model, Profile, cumtrapz, uniform_grid

__all__ = [
    "BvpSolution",
    "integral_map",
    "solve_bvp",
    "flux_identity_defect",
    "growth_rate_f",
    "GrowthRate",
]

log = logging.getLogger(__name__)

TOL_FP = 1e-12


@lru_cache(maxsize=8)
def _double_integral_matrix(n: int) -> np.ndarray:
    """Matrix of ``q -> int_y^1 int_0^eta q`` under cumulative trapezoid rules."""
    dy = 1.0 / n
    inner = cumtrapz(np.eye(n + 1), dy)
    outer = cumtrapz(inner, dy)
    mat = outer[-1] - outer
    mat.flags.writeable = False
    return mat


def _double_integral(q: np.ndarray, dy: float) -> np.ndarray:
    outer = cumtrapz(cumtrapz(q, dy), dy)
    return outer[-1] - outer


@dataclass(frozen=True)
class BvpSolution:
    """Converged discrete solution ``u[h]`` of the fixed-height problem."""

    h: float
    u: Profile
    residual: float
    iterations: int
    method: str
    u_y: np.ndarray
    u_yy: np.ndarray

    @property
    def y(self) -> np.ndarray:
        return self.u.y

    def bound_violations(self, model: Model, slack: float | None = None) -> list[str]:
        """Names of the a-priori bounds the discrete solution breaks.

        Checked: ``0 < u(0) <= u <= u(1) < c*``, ``0 <= u_y <= u_y(1)`` with
        the Robin identity for ``u_y(1)``, and ``0 <= u_yy <= r(c*) h**2 / kappa``.
        """
        p = model.params
        if slack is None:
            slack = max(10 * TOL_FP, 5.0 / self.u.n**2)
        u, uy, uyy = self.u.values, self.u_y, self.u_yy
        c = p.c_star
        out = []
        if not u[0] > 0.0:
            out.append("u(0) > 0")
        if np.any(u < u[0] - slack) or np.any(u > u[-1] + slack):
            out.append("u(0) <= u <= u(1)")
        if not u[-1] < c:
            out.append("u(1) < c*")
        flux_top = p.kappa_L / (p.L * p.kappa) * self.h * (c - u[-1])
        scale_y = max(1.0, abs(flux_top))
        if np.any(uy < -slack * scale_y) or np.any(uy > uy[-1] + slack * scale_y):
            out.append("0 <= u_y <= u_y(1)")
        if abs(uy[-1] - flux_top) > slack * scale_y:
            out.append("u_y(1) Robin identity")
        top = model.r_top * self.h**2 / p.kappa
        if np.any(uyy < -slack * max(1.0, top)) or np.any(uyy > top + slack * max(1.0, top)):
            out.append("0 <= u_yy <= r(c*) h^2 / kappa")
        return out


def integral_map(u: np.ndarray, h: float, model: Model) -> np.ndarray:
    """One application of the discrete integral map ``F`` (truncated rate)."""
    p = model.params
    n = u.size - 1
    dy = 1.0 / n
    q = model.r(u)
    return p.c_star - (p.L * h / p.kappa_L) * trapezoid(q, dx=dy) - (h**2 / p.kappa) * _double_integral(q, dy)


def _newton(u, h, model, tol, max_iter):
    p = model.params
    n = u.size - 1
    dy = 1.0 / n
    a = p.L * h / p.kappa_L
    b = h**2 / p.kappa
    weights = np.full(n + 1, dy)
    weights[[0, -1]] *= 0.5
    dmat = _double_integral_matrix(n)
    eye = np.eye(n + 1)
    res = u - integral_map(u, h, model)
    rnorm = np.max(np.abs(res))
    for it in range(1, max_iter + 1):
        if rnorm <= tol:
            return u, rnorm, it - 1
        dr = model.dr(u)
        jac = eye + a * np.outer(np.ones(n + 1), weights * dr) + b * dmat * dr
        step = np.linalg.solve(jac, -res)
        lam = 1.0
        while True:
            trial = u + lam * step
            tres = trial - integral_map(trial, h, model)
            tnorm = np.max(np.abs(tres))
            if tnorm < rnorm or lam < 1e-4:
                break
            lam *= 0.5
        u, res, rnorm = trial, tres, tnorm
    if rnorm <= tol:
        return u, rnorm, max_iter
    raise ConvergenceError(f"Newton did not converge for h={h}: residual {rnorm:.3e}", rnorm, max_iter)


def _picard(u, h, model, tol, max_iter, damping, stall_window):
    """Damped Picard sweeps; returns ``None`` for the solution when stalled."""
    theta = damping
    res = integral_map(u, h, model) - u
    rnorm = np.max(np.abs(res))
    best_in_window = rnorm
    for it in range(1, max_iter + 1):
        if rnorm <= tol:
            return u, rnorm, it - 1
        trial = u + theta * res
        tres = integral_map(trial, h, model) - trial
        tnorm = np.max(np.abs(tres))
        if tnorm > rnorm:
            theta *= 0.5
        u, res, rnorm = trial, tres, tnorm
        if it % stall_window == 0:
            if rnorm > 0.1 * best_in_window:
                return None, rnorm, it
            best_in_window = rnorm
    if rnorm <= tol:
        return u, rnorm, max_iter
    return None, rnorm, max_iter


def solve_bvp(
    h: float,
    model: Model,
    n: int = 256,
    *,
    tol: float = TOL_FP,
    method: str = "auto",
    max_iter: int = 200,
    damping: float = 1.0,
    u0: np.ndarray | None = None,
) -> BvpSolution:
    """Solve the fixed-height problem for ``u[h]`` on ``n`` cells.

    ``method="auto"`` runs Picard when its contraction estimate
    ``Lip(r) * (L h / kappa_L + h**2 / (2 kappa))`` is below 1/2 and goes
    straight to Newton otherwise; a stalled Picard run (no tenfold residual
    drop within 50 sweeps) also falls back to Newton.  ``u0`` warm-starts
    the iteration (default ``u0 = c*``).
    """
    h = float(h)
    if not np.isfinite(h) or h <= 0.0:
        raise InvalidInputError(f"height must be positive and finite, got {h!r}")
    if n < 8:
        raise InvalidInputError(f"need at least 8 cells, got {n}")
    if method not in ("auto", "picard", "newton"):
        raise InvalidInputError(f"unknown method {method!r}")
    p = model.params
    if u0 is None:
        u = np.full(n + 1, p.c_star)
    else:
        u = np.array(u0, dtype=float)
        if u.shape != (n + 1,):
            u = np.interp(uniform_grid(n), uniform_grid(u.size - 1), u)

    if method == "auto":
        lip = float(np.max(model.dr(np.linspace(0.0, p.c_star, 201))))
        contraction = lip * (p.L * h / p.kappa_L + h**2 / (2.0 * p.kappa))
        method = "picard" if contraction < 0.5 else "newton"
        fallback = True
    else:
        fallback = False

    iters = 0
    used = method
    if method == "picard":
        sol, rnorm, iters = _picard(u, h, model, tol, max_iter, damping, stall_window=50)
        if sol is None:
            if not fallback:
                raise ConvergenceError(f"Picard stalled for h={h}: residual {rnorm:.3e}", rnorm, iters)
            log.debug("Picard stalled at h=%g (residual %.3e); switching to Newton", h, rnorm)
        else:
            u = sol
    if method == "newton" or (method == "picard" and sol is None):
        u, rnorm, extra = _newton(u, h, model, tol, max_iter)
        iters += extra
        used = "newton"

    q = model.r(u)
    dy = 1.0 / n
    u_y = (h**2 / p.kappa) * cumtrapz(q, dy)
    u_yy = (h**2 / p.kappa) * q
    return BvpSolution(h=h, u=Profile(u), residual=float(rnorm), iterations=iters, method=used, u_y=u_y, u_yy=u_yy)


def flux_identity_defect(sol: BvpSolution, model: Model) -> float:
    """Max nodal mismatch in ``h**2 int_0^y r(u) = kappa u_y(y)``.

    ``u_y`` here is the finite-difference derivative of the profile, so the
    defect measures discretization error and decays like ``n**-2``.
    """
    u = sol.u
    lhs = sol.h**2 * cumtrapz(model.r(u.values), u.dy)
    rhs = model.params.kappa * u.first_difference()
    return float(np.max(np.abs(lhs - rhs)))


def _f_from_solution(sol: BvpSolution, model: Model) -> float:
    return sol.h * float(trapezoid(model.growth(model.r(sol.u.values)), dx=sol.u.dy))


class GrowthRate:
    """Callable ``h -> f(h) = h int_0^1 g(r(u[h]))`` with warm starts.

    Successive calls reuse the last converged profile as the initial
    iterate.  With ``extrapolate=True`` each value is the Richardson
    combination ``(4 f_2n - f_n) / 3`` of the ``n``- and ``2n``-cell solves.
    """

    def __init__(self, model: Model, n: int = 128, extrapolate: bool = True, tol: float = TOL_FP):
        self.model = model
        self.n = n
        self.extrapolate = extrapolate
        self.tol = tol
        self.evaluations = 0
        self._warm = {}
        self.last_solution = None

    def solve(self, h: float, n: int | None = None) -> BvpSolution:
        n = self.n if n is None else n
        sol = solve_bvp(h, self.model, n, tol=self.tol, u0=self._warm.get(n))
        self._warm[n] = sol.u.values
        return sol

    def __call__(self, h: float) -> float:
        self.evaluations += 1
        sol = self.solve(h)
        self.last_solution = sol
        f = _f_from_solution(sol, self.model)
        if self.extrapolate:
            fine = self.solve(h, 2 * self.n)
            f = (4.0 * _f_from_solution(fine, self.model) - f) / 3.0
        return f


def growth_rate_f(h: float, model: Model, n: int = 256, *, extrapolate: bool = False) -> float:
    """``f(h) = h int_0^1 g(r(u[h](y))) dy`` from a fresh BVP solve."""
    return GrowthRate(model, n=n, extrapolate=extrapolate)(h)
