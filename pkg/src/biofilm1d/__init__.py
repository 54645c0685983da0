"""One-dimensional biofilm growth with a moving boundary.

Fixed-height substrate profiles, the quasi-steady height dynamics, steady
states by shooting, the full evolutionary problem, and executable checks
of the limiting behaviour.
"""

from .bvp import BvpSolution, GrowthRate, growth_rate_f, solve_bvp
from .errors import (
    ConvergenceError,
    DomainError,
    InvalidInputError,
    InvariantViolationError,
    NoEquilibriumError,
    StepSizeError,
)
from .evolution import EvolutionState, EvolutionTrajectory, evolve, extinction_diagnostics, gradient_diagnostics
from .model import GrowthModel, Model, PhysicalParams, Profile, RateModel, validate
from .quasisteady import Trajectory, find_equilibrium_ode, integrate_quasisteady, persistence_barrier
from .shooting import find_equilibrium_shooting, monotonicity_certificate, shoot

__version__ = "0.1.0"

__all__ = [
    "BvpSolution",
    "ConvergenceError",
    "DomainError",
    "EvolutionState",
    "EvolutionTrajectory",
    "GrowthModel",
    "GrowthRate",
    "InvalidInputError",
    "InvariantViolationError",
    "Model",
    "NoEquilibriumError",
    "PhysicalParams",
    "Profile",
    "RateModel",
    "StepSizeError",
    "Trajectory",
    "evolve",
    "extinction_diagnostics",
    "find_equilibrium_ode",
    "find_equilibrium_shooting",
    "gradient_diagnostics",
    "growth_rate_f",
    "integrate_quasisteady",
    "monotonicity_certificate",
    "persistence_barrier",
    "shoot",
    "solve_bvp",
    "validate",
]
