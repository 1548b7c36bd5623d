"""Spectra of the Rabi-Stark and completed Rabi-Stark models."""

from ._core import (
    DimensionError,
    DivergenceError,
    Error,
    ModelParams,
    NoRootError,
    RegimeError,
    ResolutionError,
    SolverError,
    ValidationError,
    analytic_ground_energy,
    analytic_levels,
    analytic_mean_photon,
    co_branch_energy,
    co_excitation_energy,
    converged_spectrum,
    crossing_ladder,
    hamiltonian,
    lowest_energies,
    mean_photon_ground,
    slope_prediction,
    solve_lambda,
    staircase,
)

__all__ = [name for name in dir() if not name.startswith("_")]
