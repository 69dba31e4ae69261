"""Ground energies of the Dirichlet Pauli operator with Aharonov-Bohm flux.

The lowest eigenvalue of the Pauli operator with a positive field ``B`` on a
domain with holes is exponentially small in ``1/h``.  Lower bounds come from a
generating function ψ with ``Δψ = B`` whose hole traces are fixed by the
circulations; upper bounds come from quasimodes built on the same ψ; on the
annulus the spectrum is computed sector by sector in angular momentum.
"""

from .bounds import (
    BoundReport,
    SlopeEstimate,
    annulus_report,
    build_report,
    grid_report,
    lower_bound_basic,
    lower_bound_distance,
    lower_bound_ekp_annulus,
    lower_bound_gauge,
    slope_extract,
    upper_bound,
)
from .domain import AnnulusSpec, GridDomain, label_from_mask, rasterize_annulus, read_mask
from .errors import DomainError, EigenError, HypothesisError, SolverError, WindowError
from .field import (
    GridFunction,
    HarmonicBasis,
    flux_from_trace,
    harmonic_basis,
    oscillation,
    solve_trace_poisson,
    trace_from_flux,
)
from .gauge import GaugeResult, minimize_oscillation_over_lattice, recenter_flux
from .radial import (
    RadialField,
    RadialFluxModel,
    RadialGeneratingFunction,
    c_crit,
    oscillation_branches,
    psi_of_C,
)
from .spectral import (
    EigenResult,
    SpectralConfig,
    dirichlet_laplacian_groundstate,
    kappa_sweep,
    lambda_m,
    pauli_groundstate,
    quasimode_upper_bound,
)

__version__ = "0.1.0"

__all__ = [
    "AnnulusSpec",
    "BoundReport",
    "DomainError",
    "EigenError",
    "EigenResult",
    "GaugeResult",
    "GridDomain",
    "GridFunction",
    "HarmonicBasis",
    "HypothesisError",
    "RadialField",
    "RadialFluxModel",
    "RadialGeneratingFunction",
    "SlopeEstimate",
    "SolverError",
    "SpectralConfig",
    "WindowError",
    "annulus_report",
    "build_report",
    "c_crit",
    "dirichlet_laplacian_groundstate",
    "flux_from_trace",
    "grid_report",
    "harmonic_basis",
    "kappa_sweep",
    "label_from_mask",
    "lambda_m",
    "lower_bound_basic",
    "lower_bound_distance",
    "lower_bound_ekp_annulus",
    "lower_bound_gauge",
    "minimize_oscillation_over_lattice",
    "oscillation",
    "oscillation_branches",
    "pauli_groundstate",
    "psi_of_C",
    "quasimode_upper_bound",
    "rasterize_annulus",
    "read_mask",
    "recenter_flux",
    "slope_extract",
    "solve_trace_poisson",
    "trace_from_flux",
    "upper_bound",
]
