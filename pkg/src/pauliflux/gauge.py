"""Gauge lattice: circulations are only defined modulo ``2πh Z^k``.

A flux model is anything exposing ``k``, ``phi0``, ``osc0`` and
``oscillation_at(flux)``: :class:`pauliflux.field.HarmonicBasis` on a grid or
:class:`pauliflux.radial.RadialFluxModel` on the annulus.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

__all__ = ["GaugeResult", "minimize_oscillation_over_lattice", "recenter_flux", "gauge_distance"]

MAX_EXHAUSTIVE_K = 4
MAX_EXHAUSTIVE_W = 3


@dataclass(frozen=True)
class GaugeResult:
    alpha_star: np.ndarray
    osc_star: float
    delta: float
    shifted_flux: np.ndarray
    window: int


def _as_flux(flux, k: int) -> np.ndarray:
    flux = np.atleast_1d(np.asarray(flux, dtype=float))
    if flux.shape != (k,):
        raise ValueError(f"expected a flux vector of length {k}, got shape {flux.shape}")
    return flux


def recenter_flux(flux, phi0, h: float) -> tuple[np.ndarray, np.ndarray]:
    """Integer shift bringing ``flux`` within ``πh`` of ``phi0`` componentwise.

    Half-integers round to even.
    """
    if h <= 0:
        raise ValueError("h must be positive")
    flux = np.atleast_1d(np.asarray(flux, dtype=float))
    phi0 = np.atleast_1d(np.asarray(phi0, dtype=float))
    step = 2 * math.pi * h
    alpha = np.rint((phi0 - flux) / step).astype(np.int64)
    return alpha, flux + step * alpha


def gauge_distance(flux, phi0, h: float) -> float:
    """Euclidean distance from ``flux`` to the lattice ``phi0 + 2πh Z^k``."""
    alpha, _ = recenter_flux(flux, phi0, h)
    flux = np.atleast_1d(np.asarray(flux, dtype=float))
    phi0 = np.atleast_1d(np.asarray(phi0, dtype=float))
    step = 2 * math.pi * h
    best = math.inf
    for offset in itertools.product((-1, 0, 1), repeat=flux.size):
        shifted = flux + step * (alpha + np.asarray(offset, dtype=np.int64)) - phi0
        best = min(best, float(np.linalg.norm(shifted)))
    return best


def minimize_oscillation_over_lattice(model, flux, h: float, window: int = 2) -> GaugeResult:
    """Exhaustive search for the lattice shift of ``flux`` with the smallest oscillation.

    The box has half-width ``window`` around the shift that recentres ``flux``
    on ``model.phi0``; ties go to the lexicographically smallest shift.  The
    search is not a certificate of global optimality outside the box.
    """
    if h <= 0:
        raise ValueError("h must be positive")
    if window < 1:
        raise ValueError("window must be at least 1")
    k = model.k
    if k > MAX_EXHAUSTIVE_K and window > MAX_EXHAUSTIVE_W:
        raise ValueError(f"exhaustive search over (2*{window}+1)^{k} shifts refused; reduce the window")
    flux = _as_flux(flux, k)
    if k == 0:
        osc = model.osc0
        return GaugeResult(np.zeros(0, dtype=np.int64), osc, 0.0, flux, window)

    center, _ = recenter_flux(flux, model.phi0, h)
    step = 2 * math.pi * h
    best_alpha, best_osc = None, math.inf
    for offset in itertools.product(range(-window, window + 1), repeat=k):
        alpha = center + np.asarray(offset, dtype=np.int64)
        osc = model.oscillation_at(flux + step * alpha)
        if osc < best_osc:
            best_alpha, best_osc = alpha, osc
    return GaugeResult(
        alpha_star=best_alpha,
        osc_star=best_osc,
        delta=best_osc - model.osc0,
        shifted_flux=flux + step * best_alpha,
        window=window,
    )
