"""Executable checks of the asymptotic and large-time behaviour.

Each check runs the solvers, measures the relevant quantities and compares
them with targets.  Targets carry a provenance tag: ``theorem`` for a
limit or bound that is proved for the continuous problem, ``derived`` for
a value recomputed at run time from a formula, and ``operational`` for a
chosen quantitative reading of a qualitative statement.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .bvp import growth_rate_f, solve_bvp
from .errors import DomainError
from .evolution import evolve, extinction_diagnostics
from .model import GrowthModel, Model, PhysicalParams, Profile, RateModel, validate
from .quasisteady import integrate_quasisteady, persistence_barrier
from .shooting import find_equilibrium_shooting

__all__ = [
    "CheckReport",
    "Target",
    "check_small_h_limit",
    "check_large_h_limit",
    "check_extinction",
    "check_convergence_to_equilibrium",
    "check_figure1",
    "count_sign_changes",
    "figure1_model",
    "CHECKS",
    "run_checks",
]

PROVENANCE = ("theorem", "derived", "operational")


@dataclass
class Target:
    value: object
    provenance: str
    note: str = ""

    def __post_init__(self):
        if self.provenance not in PROVENANCE:
            raise ValueError(f"unknown provenance {self.provenance!r}")


@dataclass
class CheckReport:
    name: str
    parameters: dict
    measured: dict
    targets: dict
    tolerance: dict
    passed: bool
    failures: list = field(default_factory=list)

    def record(self) -> dict:
        rec = asdict(self)
        return json.loads(json.dumps(rec, default=_jsonable))

    def __str__(self):
        lines = [f"[{'PASS' if self.passed else 'FAIL'}] {self.name}"]
        for key, val in self.measured.items():
            lines.append(f"    {key} = {_fmt(val)}")
        for key, tgt in self.targets.items():
            lines.append(f"    target {key}: {_fmt(tgt.value)} ({tgt.provenance}{': ' + tgt.note if tgt.note else ''})")
        for msg in self.failures:
            lines.append(f"    failed: {msg}")
        return "\n".join(lines)


def _jsonable(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (PhysicalParams, RateModel, GrowthModel, Model)):
        return repr(obj)
    return str(obj)


def _fmt(val):
    if isinstance(val, float):
        return f"{val:.10g}"
    if isinstance(val, (list, tuple, np.ndarray)) and len(val) > 8:
        arr = np.asarray(val)
        return f"[{arr[0]:.4g} ... {arr[-1]:.4g}] ({arr.size} values)"
    return str(val)


def _describe(model: Model) -> dict:
    p = model.params
    return {
        "kappa": p.kappa, "kappa_L": p.kappa_L, "L": p.L, "c_star": p.c_star, "eps": p.eps,
        "rate": model.rate.spec(), "growth": model.growth.spec(),
    }


def count_sign_changes(x, tol: float = 0.0) -> int:
    """Sign changes in ``x`` ignoring entries with ``|x| <= tol``."""
    x = np.asarray(x, dtype=float)
    s = np.sign(x[np.abs(x) > tol])
    return int(np.count_nonzero(s[1:] != s[:-1]))


def figure1_model(**overrides) -> Model:
    """``r = 2 tanh``, ``g = s - 1/2``, ``c* = eps = 1``, ``kappa = kappa_L = L = 1``."""
    params = dict(kappa=1.0, kappa_L=1.0, L=1.0, c_star=1.0, eps=1.0)
    params.update(overrides)
    return Model(PhysicalParams(**params), RateModel.tanh(2.0), GrowthModel.affine(1.0, 0.5))


def check_small_h_limit(model: Model | None = None, heights=None, n: int = 256) -> CheckReport:
    """``u[h] -> c*`` and ``u_y[h](1) / h**2 -> r(c*) / kappa`` as ``h -> 0``."""
    model = model or figure1_model()
    p = model.params
    heights = np.geomspace(1.0, 1e-4, 9) if heights is None else np.asarray(heights, dtype=float)
    errors, ratios, identity = [], [], []
    target_ratio = model.r_top / p.kappa
    for h in heights:
        sol = solve_bvp(h, model, n)
        u = sol.u.values
        errors.append(float(np.max(np.abs(u - p.c_star))))
        ratios.append(float(sol.u_y[-1] / h**2))
        uy_fd = sol.u.first_difference()[-1]
        lhs = p.c_star - u[-1]
        rhs = p.robin_coefficient() * uy_fd / h
        identity.append(abs(lhs - rhs) / max(lhs, 1e-300))
    errors, ratios = np.array(errors), np.array(ratios)
    rel = abs(ratios[-1] - target_ratio) / target_ratio
    failures = []
    if np.any(np.diff(errors) >= 0):
        failures.append("sup |u - c*| not decreasing along the sequence")
    if rel > 0.01:
        failures.append(f"u_y(1)/h^2 off by {rel:.3%}")
    if max(identity) > 5.0 / n**2 * 10:
        failures.append("boundary identity c* - u(1) = (L kappa/kappa_L) u_y(1)/h violated")
    return CheckReport(
        name="small_h_limit",
        parameters={**_describe(model), "heights": heights, "n": n},
        measured={
            "sup_error": errors,
            "flux_ratio": ratios,
            "flux_ratio_rel_error": rel,
            "boundary_identity_rel_defect": float(max(identity)),
        },
        targets={
            "sup_error": Target(0.0, "theorem", "u[h] -> c* as h -> 0"),
            "flux_ratio": Target(target_ratio, "derived", "r(c*)/kappa"),
        },
        tolerance={"flux_ratio": 0.01},
        passed=not failures,
        failures=failures,
    )


def _envelope(y, h, gap, model, lam):
    """Upper bound for ``u_y / h`` from the comparison function."""
    p = model.params
    w0 = p.kappa_L * gap / (p.L * p.kappa)
    k = lam * h
    return w0 * (np.exp(-k * (1 - y)) - np.exp(-k * (1 + y))) / (1.0 - np.exp(-2 * k))


def check_large_h_limit(
    model: Model | None = None, heights=(10.0, 30.0, 100.0, 300.0), delta: float = 0.1, n: int = 1024
) -> CheckReport:
    """``u[h] -> 0`` on ``[0, 1 - delta]`` with an exponential layer at ``y = 1``.

    The gradient envelope uses the comparison solution of
    ``-kappa w'' + a w = 0`` with ``a = min r'`` on ``[0, c*]``, i.e. decay
    rate ``sqrt(a / kappa)`` in the stretched variable ``h (1 - y)``, and
    boundary value ``kappa_L (c* - u(1)) / (L kappa)``.
    """
    model = model or figure1_model()
    p = model.params
    report = validate(p, model.rate, model.growth)
    report.require("large_h")
    a = float(np.min(model.rate.derivative(np.linspace(0.0, p.c_star, 1002))))
    lam = math.sqrt(a / p.kappa)
    heights = np.asarray(heights, dtype=float)
    sup_inner, u0, env_excess, profiles = [], [], [], {}
    u_prev = None
    for h in heights:
        sol = solve_bvp(h, model, n, u0=u_prev)
        u_prev = sol.u.values
        y = sol.y
        inner = y <= 1 - delta + 1e-12
        sup_inner.append(float(np.max(sol.u.values[inner])))
        u0.append(float(sol.u.values[0]))
        bound = _envelope(y, h, p.c_star - sol.u.values[-1], model, lam)
        env_excess.append(float(np.max(sol.u_y / h - bound)))
        profiles[h] = sol.u.values
    failures = []
    sup_inner = np.array(sup_inner)
    if np.any(np.diff(sup_inner) >= 0):
        failures.append("sup over [0, 1-delta] not decreasing")
    slack = 10.0 / n**2
    if max(env_excess) > slack:
        failures.append(f"gradient envelope exceeded by {max(env_excess):.3e}")
    if 300.0 in profiles and u0[list(heights).index(300.0)] > 1e-6:
        failures.append("u(0) at h=300 above 1e-6")
    pointwise = None
    if 10.0 in profiles and 100.0 in profiles:
        y = np.linspace(0.0, 1.0, n + 1)
        mask = y <= 0.9 + 1e-12
        pointwise = float(np.max(profiles[100.0][mask] - profiles[10.0][mask]))
        if pointwise > 1e-12:
            failures.append("u[100] exceeds u[10] somewhere on [0, 0.9]")
    return CheckReport(
        name="large_h_limit",
        parameters={**_describe(model), "heights": heights, "delta": delta, "n": n, "min_dr": a},
        measured={
            "sup_inner": sup_inner,
            "u0": np.array(u0),
            "envelope_excess": np.array(env_excess),
            "u100_minus_u10_max": pointwise,
        },
        targets={
            "sup_inner": Target(0.0, "theorem", "u[h] -> 0 on compact subsets of [0,1)"),
            "u0_at_300": Target(1e-6, "operational"),
            "envelope": Target("u_y/h <= comparison bound", "derived", f"decay rate sqrt(min r'/kappa)={lam:.6g}"),
        },
        tolerance={"envelope": slack},
        passed=not failures,
        failures=failures,
    )


def extinction_model() -> Model:
    return Model(PhysicalParams(), RateModel.tanh(2.0), GrowthModel.affine(1.0, 2.0))


def check_extinction(
    model: Model | None = None,
    h0: float = 1.0,
    t_end: float = 200.0,
    *,
    evolution: bool = True,
    n: int = 128,
    v0: Profile | None = None,
) -> CheckReport:
    """Biofilm washes out when ``g(r(s)) < 0`` on ``[0, c*]``.

    The quasi-steady run stops at ``h = 1e-5 h0``, where the boundary
    ratios ``(c* - u(1)) / h`` and ``u_y(1) / h**2`` are compared with
    ``L r(c*) / kappa_L`` and ``r(c*) / kappa``.  The evolution run stops at
    ``h = 1e-4 h0`` and must also bring ``||v||_2`` below ``1e-3``.
    """
    model = model or extinction_model()
    p = model.params
    validate(p, model.rate, model.growth).require("extinction")
    rc = model.r_top
    targets_val = {"robin_ratio": p.L * rc / p.kappa_L, "flux_ratio": rc / p.kappa}
    measured, failures = {}, []

    qs = integrate_quasisteady(h0, t_end, model, h_floor=1e-5 * h0, store_profiles=False, n=n)
    measured["qs_status"] = qs.status
    measured["qs_h_end"] = float(qs.heights[-1])
    measured["qs_t_end"] = float(qs.times[-1])
    if not np.all(np.diff(qs.heights) < 0):
        failures.append("quasi-steady h not strictly decreasing")
    if qs.heights[-1] >= 1e-3 * h0:
        failures.append("quasi-steady h did not fall below 1e-3 h0")
    sol = solve_bvp(qs.heights[-1], model, n)
    h = sol.h
    robin = (p.c_star - sol.u.values[-1]) / h
    flux = sol.u.first_difference()[-1] / h**2
    measured["qs_robin_ratio"] = float(robin)
    measured["qs_flux_ratio"] = float(flux)
    for key, val in (("robin_ratio", robin), ("flux_ratio", flux)):
        rel = abs(val - targets_val[key]) / targets_val[key]
        measured[f"qs_{key}_rel_error"] = float(rel)
        if rel > 0.01:
            failures.append(f"quasi-steady {key} off by {rel:.3%}")
    if qs.envelope_violations():
        failures.append("quasi-steady height left exp(+-Mt) envelope")

    if evolution:
        if v0 is None:
            v0 = Profile.from_function(lambda y: 0.5 * p.c_star * (1.0 - y), n)
        traj = evolve(v0, h0, t_end, model, h_floor=1e-4 * h0)
        diag = extinction_diagnostics(traj)
        measured.update({f"evo_{k}": v for k, v in diag.items()})
        measured["evo_status"] = traj.status
        measured["evo_robin_ratio"] = float(traj.final.v.values[-1] / traj.final.h)
        if not diag["h_monotone_decreasing"]:
            failures.append("evolution h not strictly decreasing")
        if diag["h_end"] >= 1e-3 * h0:
            failures.append("evolution h did not fall below 1e-3 h0")
        if diag["l2_end"] > 1e-3:
            failures.append(f"evolution ||v||_2 = {diag['l2_end']:.3e} > 1e-3")
        if traj.bound_violations() or traj.envelope_violations():
            failures.append("evolution invariants violated")

    return CheckReport(
        name="extinction",
        parameters={**_describe(model), "h0": h0, "t_end": t_end, "n": n},
        measured=measured,
        targets={
            "h": Target(0.0, "theorem", "h decreases to 0"),
            "robin_ratio": Target(targets_val["robin_ratio"], "derived", "L r(c*)/kappa_L"),
            "flux_ratio": Target(targets_val["flux_ratio"], "derived", "r(c*)/kappa"),
            "evo_l2_end": Target(1e-3, "operational", "v -> 0 in L2"),
        },
        tolerance={"ratios": 0.01, "h_end": 1e-3 * h0},
        passed=not failures,
        failures=failures,
    )


def check_convergence_to_equilibrium(
    model: Model | None = None, factors=(0.5, 2.0), t_end: float = 40.0, n: int = 128
) -> CheckReport:
    """Quasi-steady trajectories from both sides approach the unique equilibrium."""
    model = model or figure1_model()
    p = model.params
    validate(p, model.rate, model.growth).require("shooting")
    eq = find_equilibrium_shooting(model, n_profile=n, certify=False)
    u_e = eq.profile.values
    measured, failures = {"h_e": eq.h_e, "c0_e": eq.c0_e}, []
    for fac in factors:
        h0 = fac * eq.h_e
        traj = integrate_quasisteady(h0, t_end, model, n=n, store_profiles=False)
        h_end = float(traj.heights[-1])
        u_end = solve_bvp(h_end, model, n).u.values
        h_err = abs(h_end - eq.h_e) / eq.h_e
        u_err = float(np.max(np.abs(u_end - u_e))) / p.c_star
        monotone = bool(np.all(np.sign(np.diff(traj.heights)) == np.sign(eq.h_e - h0)))
        measured[f"h_rel_error[{fac}]"] = h_err
        measured[f"u_error[{fac}]"] = u_err
        measured[f"monotone[{fac}]"] = monotone
        if h_err > 1e-4:
            failures.append(f"h0={fac} h_e: |h - h_e| / h_e = {h_err:.3e}")
        if u_err > 1e-4:
            failures.append(f"h0={fac} h_e: |u - u_e| = {u_err:.3e}")
        if not monotone:
            failures.append(f"h0={fac} h_e: h not monotone")
    barrier = persistence_barrier(model)
    samples = np.linspace(barrier / 50, barrier, 50)
    f_min = min(growth_rate_f(h, model, n) for h in samples)
    measured["persistence_barrier"] = barrier
    measured["min_f_below_barrier"] = f_min
    if f_min <= 0:
        failures.append("f not positive below the persistence barrier")
    return CheckReport(
        name="convergence_to_equilibrium",
        parameters={**_describe(model), "factors": list(factors), "t_end": t_end, "n": n},
        measured=measured,
        targets={
            "h": Target(eq.h_e, "theorem", "h(t) -> h_e monotonically"),
            "u": Target("u_e", "theorem", "u(t) -> u_e"),
        },
        tolerance={"h_rel": 1e-4, "u_abs": 1e-4 * p.c_star},
        passed=not failures,
        failures=failures,
    )


def smoothing_time(traj, c_star: float, tol: float = 1e-12) -> float:
    """First stored time after which ``u = c* - v`` stays non-decreasing in ``y``."""
    mono = [bool(np.all(np.diff(c_star - s.v.values) >= -tol)) for s in traj.states]
    t = traj.times
    last_bad = max((i for i, ok in enumerate(mono) if not ok), default=-1)
    if last_bad == len(mono) - 1:
        return math.inf
    return float(t[last_bad + 1])


def check_figure1(model: Model | None = None, t_end: float = 60.0, n: int = 128, dt_max: float = 5e-3) -> CheckReport:
    """Full evolution from ``h0 = 3.5``, ``u0 = cos(2 pi y)**2``.

    Passes when ``h(t) - h(t_end)`` changes sign at least twice (ignoring
    differences below ``1e-8 h(t_end)``), the profile becomes monotone
    before ``t_end / 10``, and the invariants hold at every step.
    """
    model = model or figure1_model()
    p = model.params
    v0 = Profile.from_function(lambda y: p.c_star - p.c_star * np.cos(2 * np.pi * y) ** 2, n)
    traj = evolve(v0, 3.5, t_end, model, dt_max=dt_max, store_dt=t_end / 600)
    h = traj.column("h")
    h_end = h[-1]
    changes = count_sign_changes(h - h_end, tol=1e-8 * h_end)
    t_smooth = smoothing_time(traj, p.c_star)
    bounds = traj.bound_violations()
    env = traj.envelope_violations()
    failures = []
    if changes < 2:
        failures.append(f"h(t) - h(t_end) changed sign {changes} times (need >= 2)")
    if not t_smooth <= t_end / 10:
        failures.append(f"profile monotone only from t={t_smooth:.4g} (need <= {t_end / 10:.4g})")
    if bounds or env:
        failures.append(f"invariant violations: bounds {bounds}, envelope {env}")
    return CheckReport(
        name="figure1",
        parameters={**_describe(model), "h0": 3.5, "u0": "cos^2(2 pi y)", "t_end": t_end, "n": n},
        measured={
            "sign_changes": changes,
            "smoothing_time": t_smooth,
            "h_end": float(h_end),
            "h_min": float(h.min()),
            "bound_violations": bounds,
            "envelope_violations": env,
        },
        targets={
            "sign_changes": Target(2, "operational", "h converges in an oscillatory fashion"),
            "smoothing_time": Target(t_end / 10, "operational", "oscillations in u are removed quickly"),
        },
        tolerance={"sign_change_threshold": 1e-8 * h_end},
        passed=not failures,
        failures=failures,
    )


CHECKS = {
    "small_h": check_small_h_limit,
    "large_h": check_large_h_limit,
    "extinction": check_extinction,
    "equilibrium": check_convergence_to_equilibrium,
    "figure1": check_figure1,
}


def run_checks(names=None) -> list[CheckReport]:
    names = list(CHECKS) if not names or names == ["all"] else names
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise DomainError(f"unknown checks {unknown}; choose from {sorted(CHECKS)}")
    return [CHECKS[name]() for name in names]
