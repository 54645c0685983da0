"""Command-line front end.

Subcommands ``bvp``, ``evolve``, ``quasisteady``, ``equilibrium``,
``verify`` and ``sweep``.  Settings come from :class:`RunConfig` defaults,
then a JSON file given with ``--config``, then individual flags.  Every CSV
starts with a ``#`` block holding the command and the resolved
configuration as one JSON line, so a run can be reproduced from its output.

Exit codes: 0 success, 1 configuration error, 2 solver failure,
3 no equilibrium, 4 a requested check failed.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import itertools
import json
import logging
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import __version__
from .bvp import GrowthRate, solve_bvp
from .errors import (
    ConvergenceError,
    DomainError,
    InvalidInputError,
    InvariantViolationError,
    NoEquilibriumError,
    StepSizeError,
)
from .evolution import evolve
from .model import GrowthModel, Model, PhysicalParams, Profile, RateModel, uniform_grid
from .quasisteady import find_equilibrium_ode, integrate_quasisteady
from .shooting import find_equilibrium_shooting
from .verify import CHECKS

log = logging.getLogger(__name__)

ENV_OUTPUT_DIR = "BIOFILM1D_OUTPUT_DIR"

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_SOLVER = 2
EXIT_NO_EQUILIBRIUM = 3
EXIT_CHECK_FAILED = 4

SOLVER_ERRORS = (ConvergenceError, StepSizeError, InvariantViolationError, RuntimeError, FloatingPointError)


class ConfigError(InvalidInputError):
    """Bad configuration; ``key`` names the offending setting."""

    def __init__(self, key: str, message: str):
        super().__init__(f"config key {key!r}: {message}")
        self.key = key


@dataclass
class RunConfig:
    """Everything a run needs, flat so it maps one-to-one onto flags.

    ``v0`` is one of ``const:V``, ``ramp:A`` (``v0 = A (1 - y)``), ``cos2``
    (``u0 = c* cos(2 pi y)**2``) or ``file:PATH`` (two columns ``y, v``).
    ``store_dt`` and ``h_floor`` left as ``None`` take per-command defaults.
    ``stride > 0`` writes every ``stride``-th stored profile.
    """

    kappa: float = 1.0
    kappa_L: float = 1.0
    L: float = 1.0
    c_star: float = 1.0
    eps: float = 1.0
    rate: str = "tanh:2"
    growth: str = "affine:1:0.5"
    h: float = 1.0
    h0: float = 3.5
    v0: str = "cos2"
    n: int = 128
    tol: float = 1e-12
    method: str = "auto"
    rtol: float = 1e-8
    scheme: str = "euler"
    dt_max: float = 1e-2
    t_end: float = 60.0
    store_dt: float | None = None
    h_floor: float | None = None
    equilibrium_method: str = "auto"
    output_dir: str | None = None
    prefix: str = ""
    stride: int = 0

    POSITIVE = ("kappa", "kappa_L", "L", "c_star", "eps", "h", "h0", "tol", "rtol", "dt_max", "t_end")
    CHOICES = {
        "method": ("auto", "picard", "newton"),
        "scheme": ("euler", "cnab2"),
        "equilibrium_method": ("auto", "shooting", "ode", "both"),
    }

    def __post_init__(self):
        for f in fields(self):
            setattr(self, f.name, _coerce(f.name, f.type, getattr(self, f.name)))
        for key in self.POSITIVE:
            val = getattr(self, key)
            if not (math.isfinite(val) and val > 0):
                raise ConfigError(key, f"must be positive and finite, got {val!r}")
        for key in ("store_dt", "h_floor"):
            val = getattr(self, key)
            if val is not None and not (math.isfinite(val) and val >= 0):
                raise ConfigError(key, f"must be non-negative, got {val!r}")
        for key, allowed in self.CHOICES.items():
            if getattr(self, key) not in allowed:
                raise ConfigError(key, f"must be one of {allowed}, got {getattr(self, key)!r}")
        if self.n < 8:
            raise ConfigError("n", f"need at least 8 cells, got {self.n}")
        if self.stride < 0:
            raise ConfigError("stride", "must be >= 0")
        for key, parser in (("rate", RateModel.from_spec), ("growth", GrowthModel.from_spec)):
            try:
                parser(getattr(self, key))
            except InvalidInputError as exc:
                raise ConfigError(key, str(exc)) from None
        _parse_v0_kind(self.v0)

    @classmethod
    def keys(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        if not isinstance(data, dict):
            raise ConfigError("<root>", "configuration must be a mapping")
        unknown = sorted(set(data) - set(cls.keys()))
        if unknown:
            raise ConfigError(unknown[0], "unknown key")
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError("<file>", f"not valid JSON ({exc})") from None
        return cls.from_dict(data)

    @classmethod
    def load(cls, path) -> "RunConfig":
        """Read a JSON config, or the header of a CSV written by this tool."""
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError("config", f"cannot read {path}: {exc.strerror}") from None
        if text.startswith("#"):
            for line in text.splitlines():
                if line.startswith("# config="):
                    return cls.from_json(line[len("# config="):])
            raise ConfigError("config", f"{path} has no '# config=' header line")
        return cls.from_json(text)

    def replace(self, **changes) -> "RunConfig":
        unknown = sorted(set(changes) - set(self.keys()))
        if unknown:
            raise ConfigError(unknown[0], "unknown key")
        return RunConfig(**{**self.to_dict(), **changes})

    def model(self) -> Model:
        params = PhysicalParams(kappa=self.kappa, kappa_L=self.kappa_L, L=self.L, c_star=self.c_star, eps=self.eps)
        return Model(params, RateModel.from_spec(self.rate), GrowthModel.from_spec(self.growth))

    def initial_profile(self) -> Profile:
        kind, arg = _parse_v0_kind(self.v0)
        c = self.c_star
        y = uniform_grid(self.n)
        if kind == "const":
            v = np.full(self.n + 1, arg)
        elif kind == "ramp":
            v = arg * (1.0 - y)
        elif kind == "cos2":
            v = c - c * np.cos(2 * np.pi * y) ** 2
        else:
            try:
                data = np.loadtxt(arg, delimiter=",", comments="#", ndmin=2)
            except (OSError, ValueError) as exc:
                raise ConfigError("v0", f"cannot read table {arg}: {exc}") from None
            if data.shape[1] != 2 or np.any(np.diff(data[:, 0]) <= 0):
                raise ConfigError("v0", "table needs two columns y,v with increasing y")
            v = np.interp(y, data[:, 0], data[:, 1])
        if v.min() < 0 or v.max() > c:
            raise ConfigError("v0", f"initial deficit must lie in [0, c*={c!r}]")
        return Profile(v)

    def output_path(self, name: str) -> Path:
        base = self.output_dir or os.environ.get(ENV_OUTPUT_DIR) or "."
        return Path(base) / f"{self.prefix}{name}"


def _coerce(key, annotation, value):
    if value is None:
        if "None" in str(annotation):
            return None
        raise ConfigError(key, "may not be null")
    base = str(annotation).split("|")[0].strip()
    try:
        if base == "float":
            if isinstance(value, bool):
                raise TypeError
            return float(value)
        if base == "int":
            if isinstance(value, bool) or (isinstance(value, float) and not value.is_integer()):
                raise TypeError
            return int(value)
        if base == "str":
            if not isinstance(value, str):
                raise TypeError
            return value
    except (TypeError, ValueError):
        raise ConfigError(key, f"expected {base}, got {value!r}") from None
    return value


def _parse_v0_kind(text):
    kind, _, arg = text.partition(":")
    if kind == "cos2" and not arg:
        return kind, None
    if kind in ("const", "ramp"):
        try:
            return kind, float(arg)
        except ValueError:
            pass
    if kind == "file" and arg:
        return kind, arg
    raise ConfigError("v0", f"malformed initial profile {text!r}; expected const:V, ramp:A, cos2 or file:PATH")


# ---------------------------------------------------------------- output


def fmt(value) -> str:
    """Shortest round-trip text (at most 17 significant digits) for floats."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def render_csv(command: str, config: RunConfig | None, columns, rows, extra_header=()) -> str:
    buf = io.StringIO()
    buf.write(f"# biofilm1d {__version__} command={command}\n")
    if config is not None:
        buf.write(f"# config={config.to_json()}\n")
    for line in extra_header:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def write_csv(path: Path, command, config, columns, rows, extra_header=()) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_csv(command, config, columns, rows, extra_header))
    log.info("wrote %s", path)
    return path


def read_csv(path) -> tuple[list[str], np.ndarray]:
    """Columns and numeric data of a CSV written by this tool."""
    lines = [ln for ln in Path(path).read_text().splitlines() if not ln.startswith("#")]
    columns = lines[0].split(",")
    data = np.array([[float(x) for x in ln.split(",")] for ln in lines[1:]], dtype=float)
    return columns, data.reshape(-1, len(columns))


# ---------------------------------------------------------------- commands


def cmd_bvp(cfg: RunConfig) -> int:
    model = cfg.model()
    sol = solve_bvp(cfg.h, model, cfg.n, tol=cfg.tol, method=cfg.method)
    f_h = GrowthRate(model, n=cfg.n, extrapolate=False, tol=cfg.tol)(cfg.h)
    rows = zip(sol.y, sol.u.values, sol.u_y, sol.u_yy)
    write_csv(cfg.output_path("bvp.csv"), "bvp", cfg, ["y", "u", "u_y", "u_yy"], rows)
    write_csv(
        cfg.output_path("bvp_summary.csv"), "bvp", cfg,
        ["h", "residual", "iterations", "method", "f_h"],
        [(sol.h, sol.residual, sol.iterations, sol.method, f_h)],
    )
    print(f"status: converged h={fmt(sol.h)} residual={sol.residual:.3e} iterations={sol.iterations} f(h)={fmt(f_h)}")
    return EXIT_OK


def _store_times(cfg, t_final):
    store_dt = cfg.store_dt or cfg.t_end / 200
    times = np.arange(0.0, t_final, store_dt)
    return np.append(times, t_final) if times[-1] < t_final else times


def cmd_quasisteady(cfg: RunConfig) -> int:
    model = cfg.model()
    h_floor = 1e-12 if cfg.h_floor is None else cfg.h_floor
    traj = integrate_quasisteady(
        cfg.h0, cfg.t_end, model, rtol=cfg.rtol, n=cfg.n, h_floor=max(h_floor, 1e-300),
        t_eval=_store_times(cfg, cfg.t_end),
    )
    f = GrowthRate(model, n=cfg.n)
    rows, profiles = [], []
    scale = model.r_top / model.params.kappa
    for k, (t, h) in enumerate(zip(traj.times, traj.heights)):
        G = f(h) / h
        sol = f.last_solution
        rows.append((t, h, G, sol.u_y[-1] / (h**2 * scale)))
        if cfg.stride and k % cfg.stride == 0:
            profiles.extend((t, y, model.c_star - u) for y, u in zip(sol.y, sol.u.values))
    header = [f"status={traj.status}"]
    write_csv(cfg.output_path("quasisteady.csv"), "quasisteady", cfg, ["t", "h", "G", "flux_ratio"], rows, header)
    if cfg.stride:
        write_csv(cfg.output_path("quasisteady_profiles.csv"), "quasisteady", cfg, ["t", "y", "v"], profiles, header)
    print(f"status: {traj.status} t={fmt(float(traj.times[-1]))} h={fmt(float(traj.heights[-1]))}")
    return EXIT_OK


def cmd_evolve(cfg: RunConfig) -> int:
    model = cfg.model()
    p = model.params
    traj = evolve(
        cfg.initial_profile(), cfg.h0, cfg.t_end, model, scheme=cfg.scheme, dt_max=cfg.dt_max,
        store_dt=cfg.store_dt or None, h_floor=cfg.h_floor or 0.0,
    )
    rows, profiles = [], []
    r_top = model.r_top
    for k, (state, G) in enumerate(zip(traj.states, traj.growth)):
        # u_y(1) = kappa_L h v(1) / (L kappa) from the Robin condition
        flux = p.kappa_L * state.v.values[-1] / (p.L * state.h * r_top)
        rows.append((state.t, state.h, G, flux))
        if cfg.stride and k % cfg.stride == 0:
            profiles.extend((state.t, y, v) for y, v in zip(state.v.y, state.v.values))
    header = [f"status={traj.status}"]
    write_csv(cfg.output_path("evolve.csv"), "evolve", cfg, ["t", "h", "G", "flux_ratio"], rows, header)
    if cfg.stride:
        write_csv(cfg.output_path("evolve_profiles.csv"), "evolve", cfg, ["t", "y", "v"], profiles, header)
    print(f"status: {traj.status} t={fmt(traj.final.t)} h={fmt(traj.final.h)}")
    return EXIT_OK


def _equilibrium_record(cfg: RunConfig) -> dict:
    model = cfg.model()
    method = cfg.equilibrium_method
    if method == "auto":
        method = "both" if model.growth.kind == "affine" else "ode"
    rec = {"h_e": math.nan, "c0_e": math.nan, "h_e_ode": math.nan, "h_e_shooting": math.nan,
           "relative_delta": math.nan, "unique": "", "certificate": "not run"}
    profile = None
    if method in ("shooting", "both"):
        eq = find_equilibrium_shooting(model, n_profile=cfg.n)
        rec.update(h_e=eq.h_e, h_e_shooting=eq.h_e, c0_e=eq.c0_e, unique=eq.unique,
                   certificate=eq.certificate.summary())
        profile = eq.profile.values
    if method in ("ode", "both"):
        h_ode = find_equilibrium_ode(model, n=cfg.n)
        rec["h_e_ode"] = h_ode
        if method == "ode":
            sol = solve_bvp(h_ode, model, cfg.n)
            rec.update(h_e=h_ode, c0_e=float(sol.u.values[0]))
            profile = sol.u.values
    if method == "both":
        rec["relative_delta"] = abs(rec["h_e_shooting"] - rec["h_e_ode"]) / rec["h_e_shooting"]
    rec["profile"] = profile
    return rec


EQUILIBRIUM_COLUMNS = ["h_e", "c0_e", "h_e_shooting", "h_e_ode", "relative_delta", "unique", "certificate"]


def cmd_equilibrium(cfg: RunConfig) -> int:
    rec = _equilibrium_record(cfg)
    write_csv(cfg.output_path("equilibrium.csv"), "equilibrium", cfg, EQUILIBRIUM_COLUMNS,
              [[rec[c] for c in EQUILIBRIUM_COLUMNS]])
    prof = rec["profile"]
    y = uniform_grid(prof.size - 1)
    write_csv(cfg.output_path("equilibrium_profile.csv"), "equilibrium", cfg, ["y", "u"], zip(y, prof))
    print(f"status: equilibrium h_e={fmt(rec['h_e'])} c0_e={fmt(rec['c0_e'])} "
          f"relative_delta={rec['relative_delta']:.3e} certificate: {rec['certificate']}")
    return EXIT_OK


def _run_check(name):
    return CHECKS[name]()


def cmd_verify(cfg: RunConfig, names, jobs: int = 1) -> int:
    names = list(CHECKS) if not names or "all" in names else list(names)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise ConfigError("checks", f"unknown check {unknown[0]!r}; choose from {sorted(CHECKS)} or all")
    if jobs > 1 and len(names) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_run_check, names))
    else:
        reports = [_run_check(n) for n in names]
    rows = []
    records = []
    for rep in reports:
        print(rep)
        rec = rep.record()
        records.append(json.dumps(rec, sort_keys=True))
        rows.append((rep.name, rep.passed, "; ".join(rep.failures), json.dumps(rec["measured"], sort_keys=True)))
    write_csv(cfg.output_path("verify.csv"), "verify", cfg, ["check", "passed", "failures", "measured"], rows)
    path = cfg.output_path("verify.jsonl")
    path.write_text("\n".join(records) + "\n")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_CHECK_FAILED


SWEEP_TARGETS = {
    "bvp": ["u0", "u1", "f_h", "residual", "iterations"],
    "quasisteady": ["t_final", "h_final"],
    "evolve": ["t_final", "h_final"],
    "equilibrium": ["h_e", "c0_e", "relative_delta"],
}


def _sweep_point(target: str, data: dict) -> dict:
    cfg = RunConfig.from_dict(data)
    model = cfg.model()
    try:
        if target == "bvp":
            sol = solve_bvp(cfg.h, model, cfg.n, tol=cfg.tol, method=cfg.method)
            f_h = GrowthRate(model, n=cfg.n, extrapolate=False, tol=cfg.tol)(cfg.h)
            out = dict(u0=sol.u.values[0], u1=sol.u.values[-1], f_h=f_h, residual=sol.residual,
                       iterations=sol.iterations)
            status = "converged"
        elif target == "quasisteady":
            h_floor = 1e-12 if cfg.h_floor is None else max(cfg.h_floor, 1e-300)
            traj = integrate_quasisteady(cfg.h0, cfg.t_end, model, rtol=cfg.rtol, n=cfg.n, h_floor=h_floor)
            out = dict(t_final=traj.times[-1], h_final=traj.heights[-1])
            status = traj.status
        elif target == "evolve":
            traj = evolve(cfg.initial_profile(), cfg.h0, cfg.t_end, model, scheme=cfg.scheme, dt_max=cfg.dt_max,
                          store_dt=cfg.store_dt or None, h_floor=cfg.h_floor or 0.0)
            out = dict(t_final=traj.final.t, h_final=traj.final.h)
            status = traj.status
        else:
            rec = _equilibrium_record(cfg)
            out = {k: rec[k] for k in SWEEP_TARGETS["equilibrium"]}
            status = "equilibrium"
    except NoEquilibriumError:
        out, status = {}, "no-equilibrium"
    except SOLVER_ERRORS as exc:
        out, status = {}, f"solver-failure: {exc}"
    return {"status": status, **out}


def parse_grid(specs) -> dict:
    """``["h=0.5,1,2", "b=..."]`` -> ordered mapping of key to value list."""
    grid = {}
    for spec in specs or []:
        key, sep, values = spec.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or not values:
            raise ConfigError(key or "grid", f"malformed grid entry {spec!r}; expected KEY=V1,V2,...")
        if key not in RunConfig.keys():
            raise ConfigError(key, "unknown key in grid")
        grid[key] = [_parse_flag_value(key, v) for v in values.split(",")]
    return grid


def cmd_sweep(cfg: RunConfig, grid: dict, target: str = "bvp", jobs: int = 1) -> int:
    if target not in SWEEP_TARGETS:
        raise ConfigError("target", f"must be one of {sorted(SWEEP_TARGETS)}")
    if not grid:
        raise ConfigError("grid", "sweep needs at least one --grid KEY=V1,V2,...")
    keys = list(grid)
    points = [dict(zip(keys, combo)) for combo in itertools.product(*grid.values())]
    configs = [cfg.replace(**pt).to_dict() for pt in points]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_sweep_point, [target] * len(configs), configs))
    else:
        results = [_sweep_point(target, c) for c in configs]
    columns = keys + ["status"] + SWEEP_TARGETS[target]
    rows = [[pt[k] for k in keys] + [res["status"]] + [res.get(c, math.nan) for c in SWEEP_TARGETS[target]]
            for pt, res in zip(points, results)]
    write_csv(cfg.output_path("sweep.csv"), f"sweep:{target}", cfg, columns, rows,
              [f"grid={json.dumps(grid, sort_keys=True)}"])
    failures = sum(r["status"].startswith("solver-failure") for r in results)
    print(f"status: {len(points)} points, {failures} solver failures")
    return EXIT_SOLVER if failures else EXIT_OK


# ---------------------------------------------------------------- parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError("arguments", message)


def _parse_flag_value(key, text):
    annotation = str(RunConfig.__dataclass_fields__[key].type)
    if text.lower() in ("none", "null") and "None" in annotation:
        return None
    base = annotation.split("|")[0].strip()
    try:
        if base == "float":
            return float(text)
        if base == "int":
            return int(text)
    except ValueError:
        raise ConfigError(key, f"expected {base}, got {text!r}") from None
    return text


def _add_config_flags(parser):
    parser.add_argument("--config", metavar="PATH", help="JSON config file (or a CSV written by this tool)")
    group = parser.add_argument_group("run configuration")
    for key in RunConfig.keys():
        flags = [f"--{key}"]
        if "_" in key:
            flags.append(f"--{key.replace('_', '-')}")
        group.add_argument(*flags, dest=f"cfg_{key}", default=argparse.SUPPRESS, metavar="VALUE")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="biofilm1d", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, text in (
        ("bvp", "substrate profile at fixed height h"),
        ("evolve", "full moving-boundary evolution from (h0, v0)"),
        ("quasisteady", "height dynamics h' = f(h) from h0"),
        ("equilibrium", "steady state by shooting and by root-finding on f"),
    ):
        _add_config_flags(sub.add_parser(name, help=text))
    ver = sub.add_parser("verify", help="run executable checks; exit 0 iff all pass")
    ver.add_argument("checks", nargs="*", help=f"any of {', '.join(CHECKS)} or all (default)")
    ver.add_argument("--jobs", type=int, default=1)
    _add_config_flags(ver)
    sw = sub.add_parser("sweep", help="run one target over a Cartesian parameter grid")
    sw.add_argument("--grid", action="append", metavar="KEY=V1,V2,...", help="repeatable")
    sw.add_argument("--target", default="bvp", choices=sorted(SWEEP_TARGETS))
    sw.add_argument("--jobs", type=int, default=1)
    _add_config_flags(sw)
    return parser


def resolve_config(args) -> RunConfig:
    cfg = RunConfig.load(args.config) if getattr(args, "config", None) else RunConfig()
    overrides = {k[4:]: _parse_flag_value(k[4:], v) for k, v in vars(args).items() if k.startswith("cfg_")}
    return cfg.replace(**overrides) if overrides else cfg


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
        cfg = resolve_config(args)
        if args.command == "bvp":
            return cmd_bvp(cfg)
        if args.command == "evolve":
            return cmd_evolve(cfg)
        if args.command == "quasisteady":
            return cmd_quasisteady(cfg)
        if args.command == "equilibrium":
            return cmd_equilibrium(cfg)
        if args.command == "verify":
            return cmd_verify(cfg, args.checks, args.jobs)
        return cmd_sweep(cfg, parse_grid(args.grid), args.target, args.jobs)
    except (InvalidInputError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NoEquilibriumError as exc:
        print(f"status: no-equilibrium: {exc}")
        return EXIT_NO_EQUILIBRIUM
    except SOLVER_ERRORS as exc:
        print(f"error: solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
