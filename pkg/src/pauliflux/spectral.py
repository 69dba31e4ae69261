"""Pauli spectrum on the annulus through its angular-momentum sectors.

With the potential ``A = (B0/2)(-x2, x1) + κ (-x2, x1)/r²`` the Pauli
operator splits into the radial operators

    P_m = -h² (d²/dr² + (1/r) d/dr) + (B0 r/2 - (hm - κ)/r)² - h B0,

with Dirichlet conditions at ``r = rho`` and ``r = R``.  The substitution
``v = r^{1/2} u`` removes the first-order term and adds ``-h²/(4r²)`` to the
potential; central differences then give a symmetric tridiagonal matrix.

``κ`` is the log-coefficient ``C`` of the radial generating function, so the
inner-circle circulation is ``Φ = 2πκ + π B0 rho²``.  Only ``hm - κ`` enters
``P_m``; to make ``κ → κ + h`` an exact relabelling ``m → m + 1`` in floating
point, ``κ/h`` is rounded to a multiple of ``2^-40`` before use.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import HypothesisError, WindowError
from .field import GridFunction
from .radial import RadialGeneratingFunction
from .tridiag import lowest_eigenpairs

__all__ = [
    "SpectralConfig",
    "EigenResult",
    "SweepResult",
    "pm_matrix",
    "lambda_m",
    "lambdas_for",
    "auto_window",
    "pauli_groundstate",
    "kappa_sweep",
    "dirichlet_laplacian_groundstate",
    "bessel_j0",
    "j0_first_zero",
    "default_eta",
    "quasimode_upper_bound",
]

KAPPA_QUANTUM = 2.0**-40
WINDOW_MARGIN = 10
# columns per eigensolver batch; bounds memory at large n_r
_BATCH = 256


@dataclass(frozen=True)
class SpectralConfig:
    """Parameters of the radial eigenproblems.

    ``m_window`` is an inclusive ``(lo, hi)`` pair or ``None`` for the
    automatic window of :func:`auto_window`.
    """

    h: float
    kappa: float = 0.0
    m_window: tuple[int, int] | None = None
    n_r: int = 2048
    eig_tol: float = 1e-14
    B0: float = 1.0

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError("h must be positive")
        if self.n_r < 64:
            raise ValueError("n_r must be at least 64")
        if not self.eig_tol > 0:
            raise ValueError("eig_tol must be positive")
        if self.m_window is not None and self.m_window[0] > self.m_window[1]:
            raise ValueError("m_window must satisfy lo <= hi")

    def with_kappa(self, kappa: float) -> SpectralConfig:
        return SpectralConfig(self.h, kappa, self.m_window, self.n_r, self.eig_tol, self.B0)


@dataclass(frozen=True)
class EigenResult:
    lambdas: dict[int, float]
    m_star: int
    lambda_min: float
    window_used: tuple[int, int]


@dataclass(frozen=True)
class SweepResult:
    """Per-(κ, m) ground energies; rows are κ-major, m-minor."""

    kappas: np.ndarray
    ms: np.ndarray
    table: np.ndarray = field(repr=False)  # (len(kappas), len(ms))

    @property
    def lambda_min(self) -> np.ndarray:
        return self.table.min(axis=1)

    @property
    def m_star(self) -> np.ndarray:
        return self.ms[np.argmin(self.table, axis=1)]

    def rows(self):
        for i, kappa in enumerate(self.kappas):
            for j, m in enumerate(self.ms):
                yield float(kappa), int(m), float(self.table[i, j])

    def envelope(self):
        for kappa, lam, m in zip(self.kappas, self.lambda_min, self.m_star):
            yield float(kappa), float(lam), int(m)


def _quantized_ratio(kappa: float, h: float) -> float:
    return float(np.rint(kappa / h / KAPPA_QUANTUM) * KAPPA_QUANTUM)


def _angular(h: float, kappa: float, ms) -> np.ndarray:
    """``h m - κ`` with ``κ/h`` quantized; exact under (m, κ) → (m+1, κ+h)."""
    t = _quantized_ratio(kappa, h)
    return h * (np.asarray(ms, dtype=float) - t)


def pm_matrix(h: float, a, rho: float, R: float, n_r: int, B0: float = 1.0):
    """Tridiagonal matrix of the Liouville-transformed ``P_m`` for ``a = hm - κ``.

    Returns ``diag`` of shape (n_r - 1, len(a)) and the shared off-diagonal.
    """
    if not (0 < rho < R):
        raise ValueError("the radial eigenproblem needs an annulus with 0 < rho < R")
    a = np.atleast_1d(np.asarray(a, dtype=float))
    dr = (R - rho) / n_r
    r = rho + dr * np.arange(1, n_r)
    rc = r[:, None]
    potential = (B0 * rc / 2 - a[None, :] / rc) ** 2 - h * B0 - h * h / (4 * rc * rc)
    diag = 2 * h * h / (dr * dr) + potential
    off = np.full(n_r - 2, -h * h / (dr * dr))
    return diag, off


def _solve_columns(h, a, rho, R, n_r, B0, tol) -> np.ndarray:
    out = np.empty(a.size)
    for s in range(0, a.size, _BATCH):
        diag, off = pm_matrix(h, a[s : s + _BATCH], rho, R, n_r, B0)
        out[s : s + _BATCH], _ = lowest_eigenpairs(diag, off, tol)
    return out


def lambdas_for(cfg: SpectralConfig, ms, rho: float = 0.5, R: float = 1.0) -> np.ndarray:
    """Ground energies of ``P_m`` for every ``m`` in ``ms``."""
    a = _angular(cfg.h, cfg.kappa, ms)
    return _solve_columns(cfg.h, a, rho, R, cfg.n_r, cfg.B0, cfg.eig_tol)


def lambda_m(cfg: SpectralConfig, m: int, rho: float = 0.5, R: float = 1.0) -> float:
    """Lowest Dirichlet eigenvalue of ``P_m`` on ``(rho, R)``."""
    return float(lambdas_for(cfg, [m], rho, R)[0])


def auto_window(h: float, kappa: float, rho: float, R: float, B0: float = 1.0) -> tuple[int, int]:
    """m-range for which the potential well ``hm - κ = B0 r²/2`` sits in (rho, R), plus a margin."""
    lo = math.floor((kappa + B0 * rho * rho / 2) / h) - WINDOW_MARGIN
    hi = math.ceil((kappa + B0 * R * R / 2) / h) + WINDOW_MARGIN
    return lo, hi


def pauli_groundstate(cfg: SpectralConfig, rho: float = 0.5, R: float = 1.0) -> EigenResult:
    """Minimum over ``m`` of the sector ground energies.

    With the automatic window the minimiser must be interior; a minimum on
    the window edge triggers one widening on that side and an error if it
    persists.
    """
    auto = cfg.m_window is None
    lo, hi = auto_window(cfg.h, cfg.kappa, rho, R, cfg.B0) if auto else cfg.m_window
    lambdas: dict[int, float] = {}
    for attempt in range(2):
        missing = [m for m in range(lo, hi + 1) if m not in lambdas]
        if missing:
            lambdas.update(zip(missing, lambdas_for(cfg, missing, rho, R).tolist()))
        ms = np.arange(lo, hi + 1)
        vals = np.array([lambdas[m] for m in ms])
        j = int(np.argmin(vals))
        m_star = int(ms[j])
        if not auto or lo < m_star < hi:
            break
        if attempt == 1:
            raise WindowError(
                f"minimum at window edge m={m_star} of [{lo}, {hi}] after widening "
                f"(h={cfg.h}, kappa={cfg.kappa})"
            )
        width = hi - lo + 1
        if m_star == lo:
            lo -= width
        else:
            hi += width
    window = {m: lambdas[m] for m in range(lo, hi + 1)}
    return EigenResult(window, m_star, float(vals[j]), (lo, hi))


def kappa_sweep(cfg: SpectralConfig, kappas, rho: float = 0.5, R: float = 1.0, workers: int = 1) -> SweepResult:
    """Ground energies on the product of a κ grid and the union m-window.

    ``workers`` threads split the κ grid into contiguous chunks; each matrix
    is solved independently of its batch, so results do not depend on it.
    """
    kappas = np.asarray(kappas, dtype=float)
    if kappas.ndim != 1 or kappas.size == 0:
        raise ValueError("kappa grid must be a nonempty 1-D sequence")
    if cfg.m_window is None:
        windows = [auto_window(cfg.h, k, rho, R, cfg.B0) for k in kappas]
        lo, hi = min(w[0] for w in windows), max(w[1] for w in windows)
    else:
        lo, hi = cfg.m_window
    ms = np.arange(lo, hi + 1)

    def run(chunk):
        a = np.concatenate([_angular(cfg.h, k, ms) for k in chunk])
        return _solve_columns(cfg.h, a, rho, R, cfg.n_r, cfg.B0, cfg.eig_tol).reshape(len(chunk), ms.size)

    chunks = [c for c in np.array_split(kappas, max(1, int(workers))) if c.size]
    if len(chunks) == 1:
        parts = [run(chunks[0])]
    else:
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            parts = list(pool.map(run, chunks))
    return SweepResult(kappas, ms, np.vstack(parts))


def bessel_j0(x: float) -> float:
    """J0 by its power series (adequate for |x| below about 10)."""
    q = -(x * x) / 4
    term, total, k = 1.0, 1.0, 0
    while True:
        k += 1
        term *= q / (k * k)
        total += term
        if abs(term) < 1e-18 * max(abs(total), 1e-300) and k > 2:
            return total


def j0_first_zero() -> float:
    """Smallest positive zero of J0 by bisection on [2, 3]."""
    a, b = 2.0, 3.0
    fa = bessel_j0(a)
    while True:
        mid = 0.5 * (a + b)
        if mid in (a, b):
            return mid
        fm = bessel_j0(mid)
        if (fm > 0) == (fa > 0):
            a, fa = mid, fm
        else:
            b = mid


def dirichlet_laplacian_groundstate(rho: float, R: float = 1.0, n_r: int = 4096) -> float:
    """Ground energy of the Dirichlet Laplacian on the annulus or disk.

    The ground state is radial; for ``rho > 0`` it is the lowest eigenvalue
    of ``-v'' - v/(4r²)`` on ``(rho, R)``, for the disk ``j²/R²`` with ``j``
    the first zero of J0.
    """
    if not (0 <= rho < R):
        raise ValueError("need 0 <= rho < R")
    if rho == 0:
        return j0_first_zero() ** 2 / (R * R)
    dr = (R - rho) / n_r
    r = rho + dr * np.arange(1, n_r)
    diag = 2 / (dr * dr) - 1 / (4 * r * r)
    off = np.full(n_r - 2, -1 / (dr * dr))
    lam, _ = lowest_eigenpairs(diag, off)
    return float(lam[0])


def default_eta(h: float, inradius: float) -> float:
    """Cutoff width 0.5·h^(1/2), capped below the admissible 0.5·inradius."""
    return min(0.5 * math.sqrt(h), 0.45 * inradius)


def _smoothstep(t):
    t = np.clip(t, 0.0, 1.0)
    return t * t * (3 - 2 * t), 6 * t * (1 - t)


QUADRATURE_CELLS = 40000


def quasimode_upper_bound(psi, h: float, eta: float | None = None, variant: str = "plain") -> float:
    """Rayleigh quotient of ``u = exp(-ψ/h) v``.

    The energy uses the ground-state representation

        ‖(hD - A)u‖² - h∫B|u|² = h² ∫ exp(-2ψ/h) |∇v|²     (v real),

    valid when ``A`` is generated by ``ψ``.  ``variant="plain"`` takes ``v`` a
    cubic-smoothstep cutoff rising over distance ``eta`` from the boundary;
    ``variant="sinh"`` takes ``v = 1 - exp(2ψ/h)``, i.e.
    ``u = exp(-ψ/h) - exp(ψ/h)``, and requires ψ = 0 on the boundary.
    """
    if h <= 0:
        raise ValueError("h must be positive")
    if variant not in ("plain", "sinh"):
        raise ValueError(f"unknown variant {variant!r}")
    if isinstance(psi, RadialGeneratingFunction):
        return _quasimode_radial(psi, h, eta, variant)
    if isinstance(psi, GridFunction):
        return _quasimode_grid(psi, h, eta, variant)
    raise TypeError("psi must be a RadialGeneratingFunction or a GridFunction")


def _check_eta(eta, h, inradius):
    eta = default_eta(h, inradius) if eta is None else float(eta)
    if not (0 < eta < 0.5 * inradius):
        raise HypothesisError(f"cutoff distance {eta} must lie in (0, {0.5 * inradius}) (half the inradius)")
    return eta


def _quasimode_radial(psi: RadialGeneratingFunction, h, eta, variant):
    rho, R = psi.rho, psi.R
    dr = (R - rho) / QUADRATURE_CELLS
    r = rho + dr * (np.arange(QUADRATURE_CELLS) + 0.5)
    vals = psi(r)
    weight = np.exp(-2 * (vals - psi.psi_min) / h)
    if variant == "plain":
        inradius = R if rho == 0 else 0.5 * (R - rho)
        eta = _check_eta(eta, h, inradius)
        if rho == 0:
            dist, ddist = R - r, -np.ones_like(r)
        else:
            near_inner = (r - rho) < (R - r)
            dist = np.where(near_inner, r - rho, R - r)
            ddist = np.where(near_inner, 1.0, -1.0)
        s, ds = _smoothstep(dist / eta)
        v, dv = s, ds * ddist / eta
    else:
        ends = [float(psi(R))] + ([psi.trace] if rho > 0 else [])
        if max(abs(e) for e in ends) > 1e-10:
            raise HypothesisError("the sinh quasimode needs ψ = 0 on the whole boundary (zero traces)")
        e = np.exp(2 * vals / h)
        v, dv = 1 - e, -(2 / h) * psi.derivative(r) * e
    energy = h * h * np.sum(weight * dv * dv * r)
    norm = np.sum(weight * v * v * r)
    return float(energy / norm)


def _quasimode_grid(psi: GridFunction, h, eta, variant):
    from scipy import ndimage

    dom = psi.domain
    closure = dom.closure
    vals = np.where(closure, psi.values, 0.0)
    psi_min = psi.psi_min
    if variant == "plain":
        eta = _check_eta(eta, h, dom.inradius())
        dist = ndimage.distance_transform_edt(~dom.boundary) * dom.spacing
        v, _ = _smoothstep(dist / eta)
        v = np.where(dom.interior, v, 0.0)
    else:
        if np.abs(psi.values[dom.boundary]).max() > 1e-10:
            raise HypothesisError("the sinh quasimode needs ψ = 0 on the whole boundary (zero traces)")
        v = np.where(dom.interior, 1 - np.exp(2 * np.minimum(vals, 0.0) / h), 0.0)
    weight = np.where(closure, np.exp(-2 * (vals - psi_min) / h), 0.0)
    energy = 0.0
    for axis in (0, 1):
        both = np.logical_and(*_pairs(closure, axis))
        va, vb = _pairs(v, axis)
        pa, pb = _pairs(vals, axis)
        w_edge = np.exp(-2 * (0.5 * (pa + pb) - psi_min) / h)
        energy += float(np.sum(np.where(both, w_edge * (va - vb) ** 2, 0.0)))
    norm = float(np.sum(weight * v * v)) * dom.spacing**2
    return h * h * energy / norm


def _pairs(a, axis):
    if axis == 0:
        return a[:-1, :], a[1:, :]
    return a[:, :-1], a[:, 1:]
