"""Lower and upper bounds on the Pauli ground energy, decay-rate extraction, reports.

Every lower bound has the shape ``h² λ^D exp(-2 osc / h)``.  At small ``h``
these underflow double precision long before they stop being meaningful, so
each is also carried as a logarithm, and comparisons are made in log space.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import HypothesisError
from .field import GridFunction, HarmonicBasis, grid_dirichlet_groundstate
from .gauge import gauge_distance, minimize_oscillation_over_lattice, recenter_flux
from .radial import RadialFluxModel
from .spectral import (
    SpectralConfig,
    dirichlet_laplacian_groundstate,
    j0_first_zero,
    pauli_groundstate,
    quasimode_upper_bound,
)

__all__ = [
    "GaugeBound",
    "UpperBound",
    "SlopeEstimate",
    "BoundReport",
    "REPORT_KEYS",
    "SLACK",
    "lower_bound_basic",
    "log_lower_bound_basic",
    "lower_bound_gauge",
    "lower_bound_distance",
    "lower_bound_ekp_annulus",
    "upper_bound",
    "slope_extract",
    "build_report",
    "annulus_report",
    "grid_report",
    "to_json",
]

SLACK = 0.01
REPORT_KEYS = (
    "h",
    "flux",
    "osc_used",
    "lower_basic",
    "lower_gauge",
    "lower_ekp_annulus",
    "upper_quasimode",
    "lambda_numeric",
    "two_inf_psi0",
    "delta",
    "lambda_dirichlet",
    "flags",
)


def log_lower_bound_basic(lambda_d: float, h: float, osc: float) -> float:
    """``log(h² λ^D) - 2 osc / h``."""
    if not h > 0:
        raise ValueError("h must be positive")
    if not lambda_d > 0:
        raise ValueError("the Dirichlet eigenvalue must be positive")
    if osc < 0:
        raise ValueError("an oscillation is nonnegative")
    return 2 * math.log(h) + math.log(lambda_d) - 2 * osc / h


def lower_bound_basic(lambda_d: float, h: float, osc: float) -> float:
    """``h² λ^D exp(-2 osc / h)``; may underflow to 0."""
    log_value = log_lower_bound_basic(lambda_d, h, osc)
    return h * h * lambda_d * math.exp(-2 * osc / h) if log_value > -745 else 0.0


@dataclass(frozen=True)
class GaugeBound:
    value: float
    log_value: float
    osc_star: float
    alpha_star: np.ndarray
    delta: float


def lower_bound_gauge(model, flux, h: float, lambda_d: float, window: int = 2) -> GaugeBound:
    """Basic bound at the smallest oscillation over the gauge lattice of ``flux``."""
    res = minimize_oscillation_over_lattice(model, flux, h, window)
    # tiny negative values are rounding in the minimiser comparison
    osc = max(res.osc_star, 0.0)
    return GaugeBound(
        value=lower_bound_basic(lambda_d, h, osc),
        log_value=log_lower_bound_basic(lambda_d, h, osc),
        osc_star=res.osc_star,
        alpha_star=res.alpha_star,
        delta=res.delta,
    )


def lower_bound_distance(model, flux, h: float, lambda_d: float, C: float) -> tuple[float, float]:
    """Distance form ``h² λ^D exp(-C d / h) exp(-2 Osc(ψ₀) / h)`` as (value, log value).

    ``d`` is the distance from ``flux`` to ``Φ₀ + 2πh Z^k``; the constant
    ``C`` is not determined by the theory and must be supplied.
    """
    if C < 0:
        raise ValueError("C must be nonnegative")
    d = gauge_distance(flux, model.phi0, h) if model.k else 0.0
    log_value = log_lower_bound_basic(lambda_d, h, model.osc0) - C * d / h
    return (math.exp(log_value) if log_value > -745 else 0.0), log_value


def lower_bound_ekp_annulus(rho: float, R: float, B0: float, h: float) -> float:
    """``h² j² / (π (R² - ρ²)) exp(-(R² - ρ²) B0 / (2h))`` with ``j`` the first zero of J0."""
    if not B0 > 0:
        raise ValueError("a constant positive field is required")
    if not (0 <= rho < R) or not h > 0:
        raise ValueError("need 0 <= rho < R and h > 0")
    area = R * R - rho * rho
    j = j0_first_zero()
    return h * h * j * j / (math.pi * area) * math.exp(-area * B0 / (2 * h))


@dataclass(frozen=True)
class UpperBound:
    value: float
    flux_used: np.ndarray
    alpha: np.ndarray


def _boundary_min(psi) -> float:
    if isinstance(psi, GridFunction):
        return psi.boundary_min()
    ends = [float(psi(psi.R))]
    if psi.rho > 0:
        ends.append(psi.trace)
    return min(ends)


def upper_bound(model, flux, h: float, eta: float | None = None, variant: str = "plain") -> UpperBound:
    """Quasimode bound for the generating function at the flux recentred on ``Φ₀``.

    The minimum of ψ must be attained strictly inside the domain; otherwise
    the trial state concentrates on the boundary and the bound is void.
    """
    flux = np.atleast_1d(np.asarray(flux, dtype=float))
    if model.k:
        alpha, used = recenter_flux(flux, model.phi0, h)
    else:
        alpha, used = np.zeros(0, dtype=np.int64), flux
    psi = model.psi_at(used)
    bmin = _boundary_min(psi)
    scale = max(1.0, abs(psi.psi_min))
    if not bmin > psi.psi_min + 1e-12 * scale:
        raise HypothesisError(
            f"minimum of psi is attained on the boundary: boundary minimum {bmin:.17g} "
            f"equals psi_min {psi.psi_min:.17g} at flux {used.tolist()}"
        )
    return UpperBound(quasimode_upper_bound(psi, h, eta, variant), used, alpha)


@dataclass(frozen=True)
class SlopeEstimate:
    """Decay-rate estimates, one per consecutive pair of ``h`` values.

    ``raw_slopes`` are the plain quotients ``Δ log λ / Δ(1/h)``; ``slopes``
    first divide ``λ`` by ``h^a`` with ``a`` in ``powers`` fitted on the
    enclosing triple of the table.
    """

    h_pairs: tuple[tuple[float, float], ...]
    slopes: tuple[float, ...]
    limit_estimate: float
    target: float | None = None
    raw_slopes: tuple[float, ...] = ()
    powers: tuple[float, ...] = ()

    def as_dict(self) -> dict:
        return {
            "h_pairs": [list(p) for p in self.h_pairs],
            "slopes": list(self.slopes),
            "limit_estimate": self.limit_estimate,
            "target": self.target,
            "raw_slopes": list(self.raw_slopes),
            "powers": list(self.powers),
        }


def _fit_power(pts) -> float:
    """Exponent ``a`` of ``log λ = A + a log h + s/h`` through three points."""
    h = np.array([p[0] for p in pts])
    rhs = np.log([p[1] for p in pts])
    mat = np.stack([np.ones(3), np.log(h), 1 / h], axis=1)
    return float(np.linalg.solve(mat, rhs)[1])


def slope_extract(table, target: float | None = None) -> SlopeEstimate:
    """Decay rate ``s`` of ``λ(h) ≈ A h^a exp(s/h)`` from a table ordered by decreasing ``h``.

    Each consecutive pair gives the quotient ``Δ log(λ/h^a) / Δ(1/h)``, which
    cancels ``A`` exactly.  The power ``a`` is fitted on the triple made of
    the pair and its larger-``h`` neighbour (the first pair shares the first
    triple), so ``A h^a exp(s/h)`` is recovered exactly for any ``a``.  With
    only two entries ``a = 0``.  ``limit_estimate`` is the smallest-``h`` slope.
    """
    pts = [(float(h), float(lam)) for h, lam in table]
    if len(pts) < 2:
        raise ValueError("need at least two (h, lambda) entries")
    for h, lam in pts:
        if not lam > 0:
            raise ValueError(f"lambda must be positive, got {lam} at h={h}")
        if not h > 0:
            raise ValueError("h must be positive")
    for (h1, _), (h2, _) in zip(pts, pts[1:]):
        if not h1 > h2:
            raise ValueError("h must be strictly decreasing")
    pairs, raw, slopes, powers = [], [], [], []
    for i, ((h1, l1), (h2, l2)) in enumerate(zip(pts, pts[1:])):
        a = _fit_power(pts[max(i - 1, 0) : max(i - 1, 0) + 3]) if len(pts) >= 3 else 0.0
        dinv = 1 / h1 - 1 / h2
        pairs.append((h1, h2))
        raw.append((math.log(l1) - math.log(l2)) / dinv)
        slopes.append((math.log(l1) - math.log(l2) - a * (math.log(h1) - math.log(h2))) / dinv)
        powers.append(a)
    return SlopeEstimate(tuple(pairs), tuple(slopes), slopes[-1], target, tuple(raw), tuple(powers))


@dataclass
class BoundReport:
    h: float
    flux: list
    osc_used: float
    lower_basic: float
    lower_gauge: float
    lower_ekp_annulus: float | None
    upper_quasimode: float | None
    lambda_numeric: float | None
    two_inf_psi0: float
    delta: float
    lambda_dirichlet: float
    flags: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {key: getattr(self, key) for key in REPORT_KEYS}

    def to_json(self) -> str:
        return to_json(self.as_dict())


def _check(lhs_log, rhs_log):
    if lhs_log is None or rhs_log is None:
        return "SKIPPED"
    return "PASS" if lhs_log <= rhs_log + math.log1p(SLACK) else "FAIL"


def _log(x):
    return None if x is None else (math.log(x) if x > 0 else -math.inf)


def build_report(
    model,
    flux,
    h: float,
    lambda_d: float,
    lambda_numeric: float | None = None,
    ekp: float | None = None,
    eta: float | None = None,
    variant: str = "plain",
    window: int = 2,
    distance_C: float | None = None,
) -> BoundReport:
    """Evaluate every bound for one (model, flux, h) and check their ordering."""
    flux = np.atleast_1d(np.asarray(flux, dtype=float))
    osc_at_flux = model.oscillation_at(flux)
    basic = lower_bound_basic(lambda_d, h, osc_at_flux)
    basic_log = log_lower_bound_basic(lambda_d, h, osc_at_flux)
    gauge = lower_bound_gauge(model, flux, h, lambda_d, window)

    flags: dict = {"absent": {}, "log": {"lower_basic": basic_log, "lower_gauge": gauge.log_value}}
    try:
        up = upper_bound(model, flux, h, eta, variant)
        upper = up.value
        flags["upper_flux_used"] = up.flux_used.tolist()
    except HypothesisError as exc:
        upper = None
        flags["absent"]["upper_quasimode"] = str(exc)
    if lambda_numeric is None:
        flags["absent"]["lambda_numeric"] = "no eigensolve for this geometry or field"
    if ekp is None:
        flags["absent"]["lower_ekp_annulus"] = "defined for a constant field on an annulus or disk"
    else:
        flags["log"]["lower_ekp_annulus"] = _log(ekp)
    if distance_C is not None:
        _, dlog = lower_bound_distance(model, flux, h, lambda_d, distance_C)
        flags["log"]["lower_distance"] = dlog
        flags["distance_C"] = distance_C
    flags["underflow"] = [
        name for name, v, lg in (("lower_basic", basic, basic_log), ("lower_gauge", gauge.value, gauge.log_value))
        if v == 0.0 and math.isfinite(lg)
    ]
    flags["alpha_star"] = gauge.alpha_star.tolist()

    num_log, up_log = _log(lambda_numeric), _log(upper)
    flags["basic_le_gauge"] = _check(basic_log, gauge.log_value)
    flags["gauge_le_numeric"] = _check(gauge.log_value, num_log)
    flags["numeric_le_upper"] = _check(num_log, up_log)
    flags["gauge_le_upper"] = _check(gauge.log_value, up_log)
    flags["ekp_le_numeric"] = _check(_log(ekp), num_log)
    flags["delta_nonnegative"] = "PASS" if gauge.delta >= -1e-12 else "FAIL"

    return BoundReport(
        h=float(h),
        flux=flux.tolist(),
        osc_used=gauge.osc_star,
        lower_basic=basic,
        lower_gauge=gauge.value,
        lower_ekp_annulus=ekp,
        upper_quasimode=upper,
        lambda_numeric=lambda_numeric,
        two_inf_psi0=2 * model.psi0.psi_min,
        delta=gauge.delta,
        lambda_dirichlet=lambda_d,
        flags=flags,
    )


def annulus_report(
    rho: float,
    R: float = 1.0,
    h: float = 0.1,
    kappa: float | None = None,
    flux: float | None = None,
    field=None,
    n_r: int = 2048,
    numeric: bool = True,
    **kw,
) -> BoundReport:
    """Report for an annulus (or the disk when ``rho = 0``).

    Give either ``kappa`` (the log-coefficient of ψ, which is also the
    solenoid strength of the radial operators) or the circulation ``flux``
    along the inner circle.
    """
    if (kappa is None) == (flux is None):
        raise ValueError("give exactly one of kappa and flux")
    model = RadialFluxModel(rho, R, field)
    if model.k == 0:
        phi = np.zeros(0)
        if kappa not in (None, 0) or flux not in (None, 0):
            raise ValueError("the disk carries no circulation parameter")
        kappa = 0.0
    else:
        if kappa is None:
            kappa = model.c_from_flux(flux)
        phi = np.array([model.flux_from_c(kappa)])
    lam_d = dirichlet_laplacian_groundstate(rho, R, max(n_r, 4096))
    const = model.field.is_constant
    ekp = lower_bound_ekp_annulus(rho, R, model.field.B0, h) if const and model.field.B0 > 0 else None
    lam = None
    if numeric and const and rho > 0:
        lam = pauli_groundstate(SpectralConfig(h, kappa, n_r=n_r, B0=model.field.B0), rho, R).lambda_min
    return build_report(model, phi, h, lam_d, lam, ekp, **kw)


def grid_report(basis: HarmonicBasis, flux, h: float, **kw) -> BoundReport:
    """Report on a rasterized domain; no eigensolve is available there."""
    lam_d = grid_dirichlet_groundstate(basis.domain)
    return build_report(basis, flux, h, lam_d, None, None, **kw)


def _dump(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "null"
        if math.isinf(x):
            # not JSON numbers; strings keep the document parseable
            return '"inf"' if x > 0 else '"-inf"'
        return "%.17g" % x
    if isinstance(obj, str):
        return _quote(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{_quote(str(k))}: {_dump(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_dump(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _quote(s: str) -> str:
    return json.dumps(s)


def to_json(obj) -> str:
    """JSON text with every float at 17 significant digits."""
    return _dump(obj) + "\n"
