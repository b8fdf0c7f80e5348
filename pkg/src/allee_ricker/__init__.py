"""Allee-Ricker scalar map and Ricker-type host-parasitoid system.

Equilibria, cycles, stability classification, bifurcation thresholds, basins
of attraction and extinction certificates, plus a command-line front end
(``allee-ricker`` or ``python -m allee_ricker``).
"""
__version__ = "0.1.0"

from .errors import (
    AlleeRickerError,
    BracketError,
    DegenerateDerivative,
    DomainError,
    InvalidBracket,
    NonUnique,
    NotFound,
    NumericalError,
    SolveError,
)
from .host_parasitoid import (
    RawParams,
    State,
    StabilityClass,
    SystemParams,
    Verdict,
    boundary_equilibria_report,
    classify_interior,
    find_beta_c,
    find_interior_equilibria,
    global_extinction_check,
    simulate_orbit,
    solve_stability_thresholds,
    stable_manifold_coeffs,
)
from .scalar_map import (
    ScalarParams,
    basin_of,
    bifurcation_sweep,
    classify_scalar_equilibria,
    eval_derivatives,
    eval_map,
    find_two_cycle,
    schwarzian,
    solve_xa,
)

__all__ = [
    "AlleeRickerError", "BracketError", "DegenerateDerivative", "DomainError",
    "InvalidBracket", "NonUnique", "NotFound", "NumericalError", "SolveError",
    "RawParams", "State", "StabilityClass", "SystemParams", "Verdict",
    "boundary_equilibria_report", "classify_interior", "find_beta_c",
    "find_interior_equilibria", "global_extinction_check", "simulate_orbit",
    "solve_stability_thresholds", "stable_manifold_coeffs",
    "ScalarParams", "basin_of", "bifurcation_sweep", "classify_scalar_equilibria",
    "eval_derivatives", "eval_map", "find_two_cycle", "schwarzian", "solve_xa",
]
