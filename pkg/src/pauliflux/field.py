"""Grid Poisson solves, harmonic basis and the circulation matrix.

The discrete problems minimise the edge energy

    E(u, u) = Σ_{interior edges} (u_a - u_b)² + Σ_{boundary arms} (u_i - p_c)² / θ

where a boundary arm joins an interior node to a boundary node of component
``c`` and ``θ ∈ (0, 1]`` is the fraction of a grid step at which the boundary
is crossed (``θ = 1`` on masks, giving the plain node-centred 5-point scheme;
exact crossings on the analytic annulus, giving the symmetric ghost-point
scheme).  The Euler-Lagrange matrix of ``E`` is symmetric positive definite and
``M_ij = -E(θ_i, θ_j)`` is the discrete counterpart of the Gram identity
``M_ij = -∫ ∇θ_i·∇θ_j``.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .domain import DIRECTIONS, INTERIOR, GridDomain
from .errors import SolverError

__all__ = [
    "GridFunction",
    "HarmonicBasis",
    "solve_trace_poisson",
    "harmonic_basis",
    "flux_from_trace",
    "trace_from_flux",
    "oscillation",
    "grid_energy",
    "grid_dirichlet_groundstate",
    "read_grid_field",
]

CG_RTOL = 1e-10
COND_LIMIT = 1e12


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Nodal values on a :class:`GridDomain`; NaN on exterior nodes."""

    domain: GridDomain
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.values.setflags(write=False)

    @property
    def psi_min(self) -> float:
        return float(np.nanmin(self.values))

    @property
    def psi_max(self) -> float:
        return float(np.nanmax(self.values))

    @property
    def osc(self) -> float:
        return self.psi_max - self.psi_min

    def boundary_min(self) -> float:
        return float(self.values[self.domain.boundary].min())

    def interior_values(self) -> np.ndarray:
        return self.values[self.domain.interior]

    def __add__(self, other: GridFunction) -> GridFunction:
        return GridFunction(self.domain, self.values + other.values)

    def __sub__(self, other: GridFunction) -> GridFunction:
        return GridFunction(self.domain, self.values - other.values)


class _Operator:
    """Sparse SPD system on the interior nodes of one domain."""

    def __init__(self, domain: GridDomain):
        nc = domain.node_class
        interior = nc == INTERIOR
        index = np.full(nc.shape, -1, dtype=np.int64)
        index[interior] = np.arange(np.count_nonzero(interior))
        n = int(interior.sum())

        rows, cols = [], []
        diag = np.zeros(n)
        arm_row, arm_comp, arm_w = [], [], []
        for d, (di, dj) in enumerate(DIRECTIONS):
            nb_class = np.roll(nc, (-di, -dj), axis=(0, 1))
            nb_index = np.roll(index, (-di, -dj), axis=(0, 1))
            inner = interior & (nb_class == INTERIOR)
            diag[index[inner]] += 1.0
            rows.append(index[inner])
            cols.append(nb_index[inner])
            bnd = interior & (nb_class >= 0)
            w = 1.0 / domain.arm[d][bnd]
            diag[index[bnd]] += w
            arm_row.append(index[bnd])
            arm_comp.append(nb_class[bnd].astype(np.int64))
            arm_w.append(w)

        rows = np.concatenate(rows)
        cols = np.concatenate(cols)
        off = sp.csr_matrix((-np.ones(rows.size), (rows, cols)), shape=(n, n))
        self.A = (off + sp.diags(diag)).tocsr()
        self.diag = diag
        self.index = index
        self.n = n
        self.arm_row = np.concatenate(arm_row)
        self.arm_comp = np.concatenate(arm_comp)
        self.arm_w = np.concatenate(arm_w)
        # interior-interior edges counted once (+x and +y)
        ea, eb = [], []
        for di, dj in DIRECTIONS[0], DIRECTIONS[2]:
            nb_class = np.roll(nc, (-di, -dj), axis=(0, 1))
            nb_index = np.roll(index, (-di, -dj), axis=(0, 1))
            both = interior & (nb_class == INTERIOR)
            ea.append(index[both])
            eb.append(nb_index[both])
        self.edge_a = np.concatenate(ea)
        self.edge_b = np.concatenate(eb)
        self.maxiter = 20 * (domain.nx + domain.ny)

    def rhs(self, B_int: np.ndarray, traces: np.ndarray, dx: float) -> np.ndarray:
        b = -B_int * dx * dx
        np.add.at(b, self.arm_row, self.arm_w * traces[self.arm_comp])
        return b

    def solve(self, b: np.ndarray) -> np.ndarray:
        bnorm = np.linalg.norm(b)
        if bnorm == 0:
            return np.zeros_like(b)
        precond = sp.diags(1.0 / self.diag)
        x, info = spla.cg(self.A, b, rtol=CG_RTOL, atol=0.0, maxiter=self.maxiter, M=precond)
        res = np.linalg.norm(b - self.A @ x) / bnorm
        if info != 0 or res > 10 * CG_RTOL:
            raise SolverError(
                f"conjugate gradient stopped after {self.maxiter} iterations "
                f"with relative residual {res:.3e}",
                residual=res,
            )
        return x


_operators: weakref.WeakKeyDictionary = weakref.WeakKeyDictionary()


def _operator(domain: GridDomain) -> _Operator:
    op = _operators.get(domain)
    if op is None:
        op = _operators[domain] = _Operator(domain)
    return op


def _node_values(domain: GridDomain, B) -> np.ndarray:
    """Broadcast a constant, mask-shaped or grid-shaped field to grid shape."""
    if isinstance(B, GridFunction):
        return np.nan_to_num(B.values)
    arr = np.asarray(B, dtype=float)
    if arr.ndim == 0:
        return np.full(domain.node_class.shape, float(arr))
    if arr.shape == domain.node_class.shape:
        return arr
    if arr.shape == (domain.ny - 2, domain.nx - 2):
        return np.pad(arr, 1)
    raise ValueError(f"field of shape {arr.shape} does not match grid {domain.node_class.shape}")


def _assemble(domain: GridDomain, interior_values: np.ndarray, traces: np.ndarray) -> GridFunction:
    vals = np.full(domain.node_class.shape, np.nan)
    vals[domain.interior] = interior_values
    bnd = domain.boundary
    vals[bnd] = traces[domain.node_class[bnd]]
    return GridFunction(domain, vals)


def _full_traces(domain: GridDomain, p) -> np.ndarray:
    p = np.atleast_1d(np.asarray(p, dtype=float))
    if p.shape != (domain.k,):
        raise ValueError(f"expected {domain.k} trace values, got {p.shape[0]}")
    return np.concatenate([[0.0], p])


def solve_trace_poisson(domain: GridDomain, B=1.0, p=()) -> GridFunction:
    """Solve ``Δψ = B`` with ψ = 0 on the outer boundary and ψ = p_j on hole j."""
    traces = _full_traces(domain, p)
    op = _operator(domain)
    b = op.rhs(_node_values(domain, B)[domain.interior], traces, domain.spacing)
    return _assemble(domain, op.solve(b), traces)


def grid_energy(u: GridFunction, w: GridFunction) -> float:
    """Discrete Dirichlet form ``E(u, w)`` (approximates ∫∇u·∇w)."""
    domain = u.domain
    op = _operator(domain)
    ui, wi = u.interior_values(), w.interior_values()
    e = float(np.dot(ui[op.edge_a] - ui[op.edge_b], wi[op.edge_a] - wi[op.edge_b]))
    ut = _component_traces(u)
    wt = _component_traces(w)
    du = ui[op.arm_row] - ut[op.arm_comp]
    dw = wi[op.arm_row] - wt[op.arm_comp]
    return e + float(np.dot(op.arm_w * du, dw))


def _component_traces(u: GridFunction) -> np.ndarray:
    nc = u.domain.node_class
    out = np.zeros(u.domain.k + 1)
    for c in range(u.domain.k + 1):
        out[c] = u.values[nc == c][0]
    return out


@dataclass(frozen=True, eq=False)
class HarmonicBasis:
    """Harmonic functions θ_j, circulation matrix M and reference flux Φ₀.

    ``psi0`` is the solution of ``Δψ = B`` with zero traces; ``phi0`` is its
    circulation vector.  Any ψ with traces ``p`` is ``psi0 + Σ p_j θ_j``.
    """

    domain: GridDomain
    B: np.ndarray = field(repr=False)
    thetas: tuple[GridFunction, ...] = field(repr=False)
    M: np.ndarray
    phi0: np.ndarray
    psi0: GridFunction = field(repr=False)

    @property
    def k(self) -> int:
        return self.domain.k

    @property
    def osc0(self) -> float:
        return self.psi0.osc

    def psi_from_trace(self, p) -> GridFunction:
        p = np.atleast_1d(np.asarray(p, dtype=float))
        vals = self.psi0.values.copy()
        for pj, th in zip(p, self.thetas):
            vals += pj * th.values
        return GridFunction(self.domain, vals)

    def psi_at(self, flux) -> GridFunction:
        return self.psi_from_trace(trace_from_flux(self, flux))

    def oscillation_at(self, flux) -> float:
        return self.psi_at(flux).osc


def harmonic_basis(domain: GridDomain, B=1.0) -> HarmonicBasis:
    """Solve for θ_1..θ_k and ψ₀, then assemble ``M`` and ``Φ₀``.

    ``M_ij = -E(θ_i, θ_j)`` and ``Φ_i(0) = -E(θ_i, ψ₀) - Σ θ_i B dx²``; both are
    exact consequences of discrete summation by parts, so ``Φ(p) = Φ₀ + M p``
    holds for the discrete circulations without further approximation.
    """
    k = domain.k
    Bv = _node_values(domain, B)
    thetas = []
    for j in range(1, k + 1):
        p = np.zeros(k)
        p[j - 1] = 1.0
        thetas.append(solve_trace_poisson(domain, 0.0, p))
    psi0 = solve_trace_poisson(domain, Bv, np.zeros(k))

    M = np.zeros((k, k))
    for i in range(k):
        for j in range(i, k):
            M[i, j] = M[j, i] = -grid_energy(thetas[i], thetas[j])
    area = domain.spacing**2
    bint = Bv[domain.interior]
    phi0 = np.array(
        [-grid_energy(th, psi0) - area * float(np.dot(th.interior_values(), bint)) for th in thetas]
    )
    M.setflags(write=False)
    phi0.setflags(write=False)
    return HarmonicBasis(domain, Bv, tuple(thetas), M, phi0, psi0)


def flux_from_trace(basis: HarmonicBasis, p) -> np.ndarray:
    """Affine map ``Φ(p) = Φ₀ + M p``."""
    p = np.atleast_1d(np.asarray(p, dtype=float))
    if p.shape != (basis.k,):
        raise ValueError(f"expected {basis.k} traces")
    return basis.phi0 + basis.M @ p


def trace_from_flux(basis: HarmonicBasis, flux) -> np.ndarray:
    """Inverse of :func:`flux_from_trace` by LU with partial pivoting."""
    flux = np.atleast_1d(np.asarray(flux, dtype=float))
    if flux.shape != (basis.k,):
        raise ValueError(f"expected {basis.k} flux values")
    if basis.k == 0:
        return np.zeros(0)
    cond = np.linalg.cond(basis.M)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SolverError(f"circulation matrix is numerically singular (condition {cond:.2e}); refine the grid")
    return scipy.linalg.lu_solve(scipy.linalg.lu_factor(basis.M), flux - basis.phi0)


def oscillation(psi: GridFunction) -> tuple[float, float, float]:
    """(min, max, max - min) over interior and boundary nodes."""
    lo, hi = psi.psi_min, psi.psi_max
    return lo, hi, hi - lo


def grid_dirichlet_groundstate(domain: GridDomain) -> float:
    """Lowest eigenvalue of the discrete Dirichlet Laplacian of the domain."""
    op = _operator(domain)
    if op.n < 3:
        return float(op.diag.min() / domain.spacing**2)
    vals = spla.eigsh(op.A.tocsc(), k=1, sigma=0.0, which="LM", return_eigenvectors=False)
    return float(vals[0] / domain.spacing**2)


def read_grid_field(path) -> np.ndarray:
    """Read a row-major CSV of nodal field values (one grid row per line)."""
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rows.append([float(v) for v in line.split(",")])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-numeric entry") from None
            if len(rows[-1]) != len(rows[0]):
                raise ValueError(f"{path}:{lineno}: expected {len(rows[0])} columns, found {len(rows[-1])}")
    if not rows:
        raise ValueError(f"{path}: empty field file")
    return np.array(rows)
