"""Lowest eigenpairs of batches of symmetric tridiagonal matrices.

Sturm-sequence multisection isolates the lowest eigenvalue of every matrix
in the batch, then shifted inverse iteration from just below it refines the
value.  Shifting below the eigenvalue keeps ``T - σ`` positive definite, so
the unpivoted LDLᵀ solve is stable, and the Rayleigh quotient of the iterate
resolves eigenvalues far below ``‖T‖`` down to the ``eps·‖T‖`` floor of
double precision.

Matrices are stored column-wise: ``diag`` has shape ``(n, nb)`` and ``off``
shape ``(n - 1, nb)``.  Every operation is elementwise across the batch or a
sequential reduction along the matrix axis, so a matrix gets bit-identical
results whatever else shares its batch.
"""

from __future__ import annotations

import numpy as np

from .errors import EigenError

__all__ = ["sturm_count", "lowest_eigenpairs"]

# bisection stops once the bracket is this fraction of its Gershgorin width
BRACKET_REDUCTION = 1e-10
MAX_INVERSE_ITERATIONS = 12
# multisection points per sweep; fixed so results never depend on batch size
SECTIONS = 7


def sturm_count(diag: np.ndarray, off2: np.ndarray, shifts: np.ndarray) -> np.ndarray:
    """Number of eigenvalues strictly below each shift.

    ``diag`` is (n, nb), ``off2`` the squared off-diagonal (n-1, nb) and
    ``shifts`` (nb, K).  Returns counts of shape (nb, K).

    A zero pivot turns the next pivot into ``-inf``, which is the count of a
    shift perturbed by an infinitesimal amount; no explicit guard is needed
    as long as the off-diagonal has no zeros.
    """
    count = np.zeros(shifts.shape, dtype=np.int64)
    with np.errstate(divide="ignore", invalid="ignore"):
        q = diag[0][:, None] - shifts
        count += q < 0
        for i in range(1, diag.shape[0]):
            q = (diag[i][:, None] - shifts) - off2[i - 1][:, None] / q
            count += q < 0
    return count


def _isolate_lowest(diag: np.ndarray, off: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n, nb = diag.shape
    absoff = np.abs(off)
    radius = np.zeros_like(diag)
    radius[:-1] += absoff
    radius[1:] += absoff
    lo = (diag - radius).min(axis=0)
    hi = diag.min(axis=0)
    width0 = np.maximum(hi - lo, np.finfo(float).tiny)
    target = BRACKET_REDUCTION * width0
    off2 = off * off
    K = SECTIONS
    frac = np.arange(1, K + 1) / (K + 1)

    active = np.nonzero(hi - lo > target)[0]
    for _ in range(200):
        if active.size == 0:
            break
        a_lo, a_hi = lo[active], hi[active]
        shifts = a_lo[:, None] + (a_hi - a_lo)[:, None] * frac[None, :]
        counts = sturm_count(diag[:, active], off2[:, active], shifts)
        # first shift with at least one eigenvalue below it
        has = counts >= 1
        first = np.where(has.any(axis=1), has.argmax(axis=1), K)
        rows = np.arange(active.size)
        new_lo = np.where(first > 0, shifts[rows, np.maximum(first - 1, 0)], a_lo)
        new_hi = np.where(first < K, shifts[rows, np.minimum(first, K - 1)], a_hi)
        lo[active], hi[active] = new_lo, new_hi
        active = active[(new_hi - new_lo) > target[active]]
    else:
        raise EigenError("Sturm bisection did not converge")

    check = sturm_count(diag, off2, np.stack([lo, hi], axis=1))
    bad = (check[:, 0] != 0) | (check[:, 1] < 1)
    if np.any(bad):
        idx = np.nonzero(bad)[0][:5]
        raise EigenError(
            f"bracket failure for batch members {idx.tolist()}: counts {check[idx].tolist()}, "
            f"brackets {np.stack([lo[idx], hi[idx]], axis=1).tolist()}"
        )
    return lo, hi


def _ldl(diag: np.ndarray, off: np.ndarray, sigma: np.ndarray):
    n = diag.shape[0]
    d = np.empty_like(diag)
    ell = np.empty_like(off)
    d[0] = diag[0] - sigma
    for i in range(1, n):
        ell[i - 1] = off[i - 1] / d[i - 1]
        d[i] = (diag[i] - sigma) - ell[i - 1] * off[i - 1]
    return d, ell


def _ldl_solve(d: np.ndarray, ell: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = d.shape[0]
    y = np.empty_like(b)
    y[0] = b[0]
    for i in range(1, n):
        y[i] = b[i] - ell[i - 1] * y[i - 1]
    x = np.empty_like(b)
    x[n - 1] = y[n - 1] / d[n - 1]
    for i in range(n - 2, -1, -1):
        x[i] = y[i] / d[i] - ell[i] * x[i + 1]
    return x


def lowest_eigenpairs(diag, off, tol: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """Lowest eigenvalue and unit eigenvector of each matrix in a batch.

    Parameters
    ----------
    diag : array (n, nb)
    off : array (n-1, nb) or (n-1,)
        Off-diagonal, shared by all matrices when one-dimensional.
    tol : float
        Absolute eigenvalue tolerance for the inverse-iteration stop.

    Returns
    -------
    lam : array (nb,)
    vec : array (n, nb)
    """
    diag = np.asarray(diag, dtype=float)
    if diag.ndim == 1:
        diag = diag[:, None]
    n, nb = diag.shape
    off = np.asarray(off, dtype=float)
    if off.ndim == 1:
        off = np.repeat(off[:, None], nb, axis=1)
    if off.shape != (n - 1, nb):
        raise ValueError(f"off-diagonal shape {off.shape} does not match diagonal {diag.shape}")
    if not (np.all(np.isfinite(diag)) and np.all(np.isfinite(off))):
        raise EigenError("matrix entries are not finite")
    if np.any(off == 0):
        raise EigenError("zero off-diagonal entry: the matrix splits; pass the blocks separately")

    single = nb == 1
    if single:
        # a lone column would be summed pairwise; duplicating it keeps the
        # sequential column sums used for every other batch size
        diag, off, nb = np.repeat(diag, 2, axis=1), np.repeat(off, 2, axis=1), 2

    lo, hi = _isolate_lowest(diag, off)
    gap = hi - lo
    sigma = lo - np.maximum(gap, 64 * np.finfo(float).eps * np.abs(diag).max(axis=0))
    d, ell = _ldl(diag, off, sigma)

    v = np.full((n, nb), 1.0 / np.sqrt(n))
    lam = 0.5 * (lo + hi)
    live = np.ones(nb, dtype=bool)
    for _ in range(MAX_INVERSE_ITERATIONS):
        x = _ldl_solve(d, ell, v)
        xx = (x * x).sum(axis=0)
        new = sigma + (x * v).sum(axis=0) / xx
        # converged columns are frozen so each result depends on its own matrix only
        v[:, live] = x[:, live] / np.sqrt(xx[live])
        done = np.abs(new - lam) <= np.maximum(tol, 1e-15 * np.abs(new))
        lam = np.where(live, new, lam)
        live &= ~done
        if not live.any():
            break
    v *= np.where(v.sum(axis=0) < 0, -1.0, 1.0)
    if single:
        return lam[:1], v[:, :1]
    return lam, v
