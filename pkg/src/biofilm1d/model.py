"""Physical parameters, consumption/growth laws and shared grid helpers.

Every solver in the package works on the unit interval ``[0, 1]`` with a
uniform grid of ``n + 1`` nodes and composite-trapezoid quadrature.  The
consumption rate is always evaluated through its truncation to ``[0, c*]``
so that iterates stay bounded even before they have converged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid
from scipy.interpolate import CubicSpline

from .errors import DomainError, InvalidInputError

__all__ = [
    "PhysicalParams",
    "RateModel",
    "GrowthModel",
    "Model",
    "Profile",
    "ValidationReport",
    "validate",
    "growth_integral",
    "uniform_grid",
    "cumtrapz",
]

MIN_CELLS = 8


def _check_finite_positive(name, value):
    value = float(value)
    if not math.isfinite(value):
        raise InvalidInputError(f"{name} must be finite, got {value!r}")
    if value <= 0.0:
        raise InvalidInputError(f"{name} must be positive, got {value!r}")
    return value


def uniform_grid(n: int) -> np.ndarray:
    """Nodes ``y_i = i / n`` for ``i = 0..n``."""
    return np.linspace(0.0, 1.0, n + 1)


def cumtrapz(values: np.ndarray, dx: float) -> np.ndarray:
    """Cumulative trapezoid integral starting at 0, same length as ``values``."""
    return cumulative_trapezoid(values, dx=dx, axis=0, initial=0.0)


@dataclass(frozen=True)
class PhysicalParams:
    """Dimensional constants of the reduced model.

    ``kappa`` and ``kappa_L`` are the diffusivities inside the biofilm and in
    the diffusive boundary layer of thickness ``L``; ``c_star`` is the bulk
    substrate concentration and ``eps`` the substrate time-scale factor.
    """

    kappa: float = 1.0
    kappa_L: float = 1.0
    L: float = 1.0
    c_star: float = 1.0
    eps: float = 1.0

    def __post_init__(self):
        for name in ("kappa", "kappa_L", "L", "c_star", "eps"):
            object.__setattr__(self, name, _check_finite_positive(name, getattr(self, name)))

    def robin_coefficient(self) -> float:
        """``L * kappa / kappa_L``, the Robin coefficient at the biofilm surface."""
        return self.L * self.kappa / self.kappa_L


def _tanh_rate(rho):
    return (lambda s: rho * np.tanh(s), lambda s: rho / np.cosh(s) ** 2)


def _monod_rate(r_max, K):
    return (lambda s: r_max * s / (K + s), lambda s: r_max * K / (K + s) ** 2)


def _linear_rate(lam):
    return (lambda s: lam * np.asarray(s, dtype=float), lambda s: np.full_like(np.asarray(s, dtype=float), lam))


@dataclass(frozen=True)
class RateModel:
    """Substrate consumption rate ``r`` with derivative and truncation.

    Use the constructors :meth:`tanh`, :meth:`monod`, :meth:`linear` and
    :meth:`tabulated` rather than the raw initializer.  Tabulated rates are
    interpolated by a cubic spline and differentiated by centered finite
    differences, which is less accurate than the analytic kinds.
    """

    kind: str
    params: tuple
    _funcs: tuple = field(default=None, repr=False, compare=False)

    KINDS = ("tanh", "monod", "linear", "tabulated")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise InvalidInputError(f"unknown rate kind {self.kind!r}; expected one of {self.KINDS}")
        if self.kind == "tanh":
            (rho,) = self.params
            funcs = _tanh_rate(float(rho))
        elif self.kind == "monod":
            r_max, K = self.params
            _check_finite_positive("K", K)
            funcs = _monod_rate(float(r_max), float(K))
        elif self.kind == "linear":
            (lam,) = self.params
            funcs = _linear_rate(float(lam))
        else:
            s, vals = (np.asarray(p, dtype=float) for p in self.params)
            if s.ndim != 1 or s.shape != vals.shape or s.size < 4:
                raise InvalidInputError("tabulated rate needs two equal-length 1-D arrays with >= 4 points")
            if not (np.all(np.isfinite(s)) and np.all(np.isfinite(vals))):
                raise InvalidInputError("tabulated rate contains non-finite values")
            spline = CubicSpline(s, vals)
            step = 1e-6 * max(1.0, float(np.ptp(s)))

            def deriv(x, spline=spline, step=step):
                return (spline(x + step) - spline(x - step)) / (2.0 * step)

            funcs = (spline, deriv)
        for p in np.ravel(np.asarray(self.params, dtype=object)):
            if np.ndim(p) == 0 and not math.isfinite(float(p)):
                raise InvalidInputError(f"non-finite rate parameter in {self.params!r}")
        object.__setattr__(self, "_funcs", funcs)

    @classmethod
    def tanh(cls, rho: float = 2.0) -> "RateModel":
        return cls("tanh", (float(rho),))

    @classmethod
    def monod(cls, r_max: float, K: float) -> "RateModel":
        return cls("monod", (float(r_max), float(K)))

    @classmethod
    def linear(cls, lam: float) -> "RateModel":
        return cls("linear", (float(lam),))

    @classmethod
    def tabulated(cls, s: Sequence[float], values: Sequence[float]) -> "RateModel":
        return cls("tabulated", (tuple(map(float, s)), tuple(map(float, values))))

    @property
    def is_tabulated(self) -> bool:
        return self.kind == "tabulated"

    def __call__(self, s):
        return self._funcs[0](s)

    def derivative(self, s):
        return self._funcs[1](s)

    def truncated(self, s, c_star: float):
        """``r`` on ``[0, c*]``, 0 below, ``r(c*)`` above."""
        s = np.asarray(s, dtype=float)
        return np.where(s < 0.0, 0.0, self(np.clip(s, 0.0, c_star)))

    def truncated_derivative(self, s, c_star: float):
        """Derivative of :meth:`truncated`; one-sided ``r'`` at the kinks."""
        s = np.asarray(s, dtype=float)
        inside = (s >= 0.0) & (s <= c_star)
        return np.where(inside, self.derivative(np.clip(s, 0.0, c_star)), 0.0)

    def spec(self) -> str:
        """Compact ``kind:p1:p2`` form used by the command line."""
        if self.kind == "tabulated":
            return "tabulated"
        return ":".join([self.kind, *(repr(float(p)) for p in self.params)])

    @classmethod
    def from_spec(cls, text: str) -> "RateModel":
        kind, *args = text.strip().split(":")
        try:
            values = [float(a) for a in args]
        except ValueError:
            raise InvalidInputError(f"malformed rate spec {text!r}") from None
        arity = {"tanh": 1, "monod": 2, "linear": 1}
        if kind not in arity or len(values) != arity[kind]:
            raise InvalidInputError(f"malformed rate spec {text!r}; expected tanh:RHO, monod:RMAX:K or linear:LAMBDA")
        return cls(kind, tuple(values))


@dataclass(frozen=True)
class GrowthModel:
    """Growth law ``g`` applied to the local consumption rate.

    ``affine`` is ``alpha * (s - b)``; ``tabulated`` is a piecewise-linear
    interpolant (constant beyond the end nodes), which covers constant laws
    such as ``g = 0`` or ``g = -1`` used in tests.
    """

    kind: str
    params: tuple

    def __post_init__(self):
        if self.kind == "affine":
            alpha, b = (float(p) for p in self.params)
            _check_finite_positive("alpha", alpha)
            _check_finite_positive("b", b)
            object.__setattr__(self, "params", (alpha, b))
        elif self.kind == "tabulated":
            s, vals = (np.asarray(p, dtype=float) for p in self.params)
            if s.ndim != 1 or s.shape != vals.shape or s.size < 2 or np.any(np.diff(s) <= 0):
                raise InvalidInputError("tabulated growth needs increasing nodes and matching values")
            if not (np.all(np.isfinite(s)) and np.all(np.isfinite(vals))):
                raise InvalidInputError("tabulated growth contains non-finite values")
        else:
            raise InvalidInputError(f"unknown growth kind {self.kind!r}")

    @classmethod
    def affine(cls, alpha: float, b: float) -> "GrowthModel":
        return cls("affine", (alpha, b))

    @classmethod
    def tabulated(cls, s: Sequence[float], values: Sequence[float]) -> "GrowthModel":
        return cls("tabulated", (tuple(map(float, s)), tuple(map(float, values))))

    @classmethod
    def constant(cls, value: float) -> "GrowthModel":
        return cls.tabulated((0.0, 1.0), (value, value))

    @property
    def alpha(self) -> float:
        return self.params[0] if self.kind == "affine" else float("nan")

    @property
    def b(self) -> float:
        return self.params[1] if self.kind == "affine" else float("nan")

    def __call__(self, s):
        if self.kind == "affine":
            alpha, b = self.params
            return alpha * (np.asarray(s, dtype=float) - b)
        nodes, vals = self.params
        return np.interp(s, nodes, vals)

    def lipschitz(self) -> float:
        if self.kind == "affine":
            return self.params[0]
        nodes, vals = (np.asarray(p) for p in self.params)
        return float(np.max(np.abs(np.diff(vals) / np.diff(nodes))))

    def sup_norm(self, r_top: float) -> float:
        """``max |g|`` over ``[0, r_top]`` (exact for both kinds)."""
        pts = [0.0, r_top]
        if self.kind == "tabulated":
            nodes = np.asarray(self.params[0])
            pts.extend(nodes[(nodes > 0.0) & (nodes < r_top)])
        return float(np.max(np.abs(self(np.asarray(pts)))))

    def spec(self) -> str:
        if self.kind == "affine":
            return f"affine:{self.params[0]!r}:{self.params[1]!r}"
        nodes, vals = self.params
        if len(set(vals)) == 1:
            return f"const:{vals[0]!r}"
        return "tabulated"

    @classmethod
    def from_spec(cls, text: str) -> "GrowthModel":
        kind, *args = text.strip().split(":")
        try:
            values = [float(a) for a in args]
        except ValueError:
            raise InvalidInputError(f"malformed growth spec {text!r}") from None
        if kind == "affine" and len(values) == 2:
            return cls.affine(*values)
        if kind == "const" and len(values) == 1:
            return cls.constant(values[0])
        raise InvalidInputError(f"malformed growth spec {text!r}; expected affine:ALPHA:B or const:VALUE")


@dataclass(frozen=True)
class Model:
    """Parameters, rate and growth law bundled together."""

    params: PhysicalParams = field(default_factory=PhysicalParams)
    rate: RateModel = field(default_factory=RateModel.tanh)
    growth: GrowthModel = field(default_factory=lambda: GrowthModel.affine(1.0, 0.5))

    @property
    def c_star(self) -> float:
        return self.params.c_star

    @property
    def r_top(self) -> float:
        """``r(c*)``."""
        return float(self.rate(self.params.c_star))

    @property
    def growth_bound(self) -> float:
        """Sup-norm of ``g`` on ``[0, r(c*)]``."""
        return self.growth.sup_norm(self.r_top)

    def r(self, s):
        return self.rate.truncated(s, self.params.c_star)

    def dr(self, s):
        return self.rate.truncated_derivative(s, self.params.c_star)

    def g_of_r(self, s):
        return self.growth(self.r(s))


class Profile:
    """Nodal values on the uniform grid of ``[0, 1]`` with ``n`` cells.

    The values are read-only.  Differences are second-order: centered in the
    interior and one-sided at the two endpoints.
    """

    __slots__ = ("_values",)

    def __init__(self, values):
        values = np.array(values, dtype=float)
        if values.ndim != 1 or values.size < MIN_CELLS + 1:
            raise InvalidInputError(f"profile needs at least {MIN_CELLS} cells, got {values.size - 1}")
        if not np.all(np.isfinite(values)):
            raise InvalidInputError("profile contains non-finite values")
        values.flags.writeable = False
        self._values = values

    @classmethod
    def from_function(cls, func: Callable[[np.ndarray], np.ndarray], n: int) -> "Profile":
        y = uniform_grid(n)
        return cls(np.broadcast_to(func(y), y.shape))

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def n(self) -> int:
        return self._values.size - 1

    @property
    def dy(self) -> float:
        return 1.0 / self.n

    @property
    def y(self) -> np.ndarray:
        return uniform_grid(self.n)

    def __len__(self):
        return self._values.size

    def __getitem__(self, i):
        return self._values[i]

    def __repr__(self):
        return f"Profile(n={self.n}, min={self._values.min():.6g}, max={self._values.max():.6g})"

    def first_difference(self) -> np.ndarray:
        return np.gradient(self._values, self.dy, edge_order=2)

    def second_difference(self) -> np.ndarray:
        u, dy2 = self._values, self.dy**2
        d2 = np.empty_like(u)
        d2[1:-1] = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / dy2
        d2[0] = (2.0 * u[0] - 5.0 * u[1] + 4.0 * u[2] - u[3]) / dy2
        d2[-1] = (2.0 * u[-1] - 5.0 * u[-2] + 4.0 * u[-3] - u[-4]) / dy2
        return d2

    def integral(self) -> float:
        return float(trapezoid(self._values, dx=self.dy))

    def l2_norm(self) -> float:
        return math.sqrt(float(trapezoid(self._values**2, dx=self.dy)))

    def resample(self, n: int) -> "Profile":
        """Linear interpolation onto a grid with ``n`` cells."""
        return Profile(np.interp(uniform_grid(n), self.y, self._values))


# Assumption name -> checks it needs; used by ValidationReport.require.
REQUIREMENTS = {
    "bvp": ("rate_zero_at_origin", "rate_positive", "rate_nondecreasing"),
    "evolution": ("rate_zero_at_origin", "rate_positive"),
    "quasisteady": ("rate_zero_at_origin", "rate_positive", "rate_nondecreasing"),
    "shooting": (
        "rate_zero_at_origin",
        "rate_positive",
        "rate_strictly_increasing",
        "growth_affine",
        "equilibrium_regime",
    ),
    "large_h": ("rate_zero_at_origin", "rate_positive", "rate_strictly_increasing"),
    "extinction": ("rate_zero_at_origin", "rate_positive", "growth_negative"),
}


@dataclass
class ValidationReport:
    """Pass/fail for each modelling assumption, with a short detail string."""

    checks: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def add(self, name, passed, detail=""):
        self.checks[name] = bool(passed)
        self.details[name] = detail

    def passed(self, name) -> bool:
        return self.checks.get(name, False)

    def failures(self, operation=None):
        names = REQUIREMENTS[operation] if operation else self.checks
        return [n for n in names if not self.checks.get(n, False)]

    def require(self, operation: str) -> None:
        """Raise :class:`DomainError` if an assumption needed by ``operation`` fails."""
        bad = self.failures(operation)
        if bad:
            msg = "; ".join(f"{n} ({self.details.get(n, 'not checked')})" for n in bad)
            raise DomainError(f"{operation} requires: {msg}")

    def __str__(self):
        return "\n".join(
            f"{'PASS' if ok else 'FAIL'} {name}: {self.details[name]}" for name, ok in self.checks.items()
        )


def validate(
    params: PhysicalParams, rate: RateModel, growth: GrowthModel, n_samples: int = 1000
) -> ValidationReport:
    """Check the structural assumptions on ``r`` and ``g`` by sampling ``[0, c*]``.

    Positivity of ``r'`` is sampled at ``n_samples`` interior points plus the
    two endpoints, so it is evidence rather than proof.
    """
    c_star = params.c_star
    s = np.linspace(0.0, c_star, n_samples + 2)
    with np.errstate(all="ignore"):
        r = np.asarray(rate(s), dtype=float)
        dr = np.asarray(rate.derivative(s), dtype=float)
    if not (np.all(np.isfinite(r)) and np.all(np.isfinite(dr))):
        raise InvalidInputError("rate is not finite on [0, c*]")
    r_top = float(r[-1])
    rep = ValidationReport()
    rep.add("rate_zero_at_origin", abs(r[0]) <= 1e-12 * max(1.0, abs(r_top)), f"r(0)={r[0]:.3g}")
    rep.add("rate_positive", bool(np.all(s[1:] * r[1:] > 0.0)), f"min s*r(s)={np.min(s[1:] * r[1:]):.3g}")
    rep.add("rate_nondecreasing", bool(np.all(dr >= 0.0)), f"min r'={dr.min():.3g}")
    note = " (finite-difference r')" if rate.is_tabulated else ""
    rep.add("rate_strictly_increasing", bool(np.all(dr > 0.0)), f"min r'={dr.min():.3g}{note}")
    lip = growth.lipschitz()
    rep.add("growth_lipschitz", math.isfinite(lip), f"Lipschitz constant {lip:.6g}")
    rep.add("growth_affine", growth.kind == "affine", f"kind={growth.kind}")
    g_top = float(growth(r_top))
    rep.add("equilibrium_regime", g_top > 0.0, f"g(r(c*))={g_top:.6g}")
    g_on_r = growth(r)
    rep.add("growth_negative", bool(np.all(g_on_r < 0.0)), f"max g(r(s))={g_on_r.max():.6g}")
    return rep


def growth_integral(v: Profile, rate: RateModel, growth: GrowthModel, c_star: float) -> float:
    """Trapezoid approximation of ``G(v) = int_0^1 g(r(c* - v(y))) dy``."""
    vals = growth(rate.truncated(c_star - v.values, c_star))
    return float(trapezoid(vals, dx=v.dy))
