"""Planar computational domains: the analytic annulus and rasterized regions.

Nodes of a :class:`GridDomain` carry one of three tags, stored as integers in
``node_class``:

* ``EXTERIOR`` (-2): outside the closed domain and not adjacent to it,
* ``INTERIOR`` (-1): unknowns of the discrete problems,
* ``c >= 0``: a boundary node of component ``c``; ``0`` is the outer boundary
  and ``1..k`` are the holes.

Boundary nodes are the complement nodes that are 4-adjacent to an interior
node.  For analytic geometry the domain additionally records, for every
interior node and every grid direction, the fraction of a grid step at which
the true boundary curve is crossed (``arm``).  Masks have ``arm == 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import ndimage

from .errors import DomainError

__all__ = [
    "EXTERIOR",
    "INTERIOR",
    "DIRECTIONS",
    "AnnulusSpec",
    "GridDomain",
    "rasterize_annulus",
    "label_from_mask",
    "read_mask",
    "write_mask",
]

EXTERIOR = -2
INTERIOR = -1

# (row offset, column offset) for +x, -x, +y, -y
DIRECTIONS = ((0, 1), (0, -1), (1, 0), (-1, 0))

# smallest admissible boundary-crossing fraction; guards the 1/theta weights
_MIN_ARM = 1e-6


@dataclass(frozen=True)
class AnnulusSpec:
    """Annulus ``rho < |x| < R``; ``rho = 0`` is the disk of radius ``R``."""

    rho: float
    R: float = 1.0

    def __post_init__(self):
        if not (0.0 <= self.rho < self.R):
            raise DomainError(f"need 0 <= rho < R, got rho={self.rho}, R={self.R}")

    @property
    def k(self) -> int:
        return 0 if self.rho == 0 else 1

    @property
    def inradius(self) -> float:
        return self.R if self.rho == 0 else 0.5 * (self.R - self.rho)

    @property
    def area(self) -> float:
        return math.pi * (self.R**2 - self.rho**2)


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class GridDomain:
    """Node-centred grid with labelled boundary components.

    Attributes
    ----------
    origin : (float, float)
        Coordinates of node ``[0, 0]``; row index runs along y.
    spacing : float
        Isotropic node spacing.
    node_class : ndarray of int, shape (ny, nx)
    k : int
        Number of holes.
    arm : ndarray, shape (4, ny, nx)
        Boundary-crossing fraction in each of :data:`DIRECTIONS`; equal to 1
        wherever the neighbour is not a boundary node.
    annulus : AnnulusSpec or None
        Set when the grid was produced by :func:`rasterize_annulus`.
    """

    origin: tuple[float, float]
    spacing: float
    node_class: np.ndarray
    k: int
    arm: np.ndarray = field(repr=False)
    annulus: AnnulusSpec | None = None

    @property
    def ny(self) -> int:
        return self.node_class.shape[0]

    @property
    def nx(self) -> int:
        return self.node_class.shape[1]

    @property
    def interior(self) -> np.ndarray:
        return self.node_class == INTERIOR

    @property
    def boundary(self) -> np.ndarray:
        return self.node_class >= 0

    @property
    def closure(self) -> np.ndarray:
        """Interior and boundary nodes (the discrete closed domain)."""
        return self.node_class != EXTERIOR

    def boundary_of(self, c: int) -> np.ndarray:
        return self.node_class == c

    @property
    def n_interior(self) -> int:
        return int(np.count_nonzero(self.interior))

    def coords(self) -> tuple[np.ndarray, np.ndarray]:
        x = self.origin[0] + self.spacing * np.arange(self.nx)
        y = self.origin[1] + self.spacing * np.arange(self.ny)
        return np.meshgrid(x, y)

    def inradius(self) -> float:
        """Largest distance from an interior node to the nearest boundary node."""
        if self.annulus is not None:
            return self.annulus.inradius
        dist = ndimage.distance_transform_edt(~self.boundary) * self.spacing
        return float(dist[self.interior].max())


def _boundary_labels(node_class: np.ndarray, complement_label: np.ndarray) -> np.ndarray:
    """Tag complement nodes 4-adjacent to the interior with their component label."""
    interior = node_class == INTERIOR
    touches = np.zeros_like(interior)
    touches[:, 1:] |= interior[:, :-1]
    touches[:, :-1] |= interior[:, 1:]
    touches[1:, :] |= interior[:-1, :]
    touches[:-1, :] |= interior[1:, :]
    out = node_class.copy()
    edge = touches & ~interior
    out[edge] = complement_label[edge]
    return out


def _check_connected(interior: np.ndarray) -> None:
    _, n = ndimage.label(interior)
    if n == 0:
        raise DomainError("domain has no interior nodes")
    if n > 1:
        raise DomainError(f"interior is disconnected ({n} components); the domain must be connected")


def rasterize_annulus(spec: AnnulusSpec, n: int) -> GridDomain:
    """Sample the annulus on a square grid with ``n`` nodes per unit length.

    The origin is a grid node.  Interior nodes satisfy ``rho < r < R``; for
    the disk (``rho = 0``) every node with ``r < R`` is interior and ``k = 0``.
    """
    rho, R = spec.rho, spec.R
    if (R - rho) * n < 8:
        raise DomainError(
            f"degenerate grid: {(R - rho) * n:.1f} nodes across the gap (need at least 8); "
            f"increase n above {8 / (R - rho):.0f}"
        )
    dx = 1.0 / n
    half = int(math.ceil(R * n)) + 1
    ticks = dx * np.arange(-half, half + 1)
    X, Y = np.meshgrid(ticks, ticks)
    r = np.hypot(X, Y)

    inside = (r < R) & (r > rho) if rho > 0 else r < R
    node_class = np.full(r.shape, EXTERIOR, dtype=np.int16)
    node_class[inside] = INTERIOR
    complement = np.where(r >= R, 0, 1).astype(np.int16)
    node_class = _boundary_labels(node_class, complement)
    _check_connected(node_class == INTERIOR)

    arm = np.ones((4,) + r.shape)
    for d, (di, dj) in enumerate(DIRECTIONS):
        nb = np.roll(node_class, (-di, -dj), axis=(0, 1))
        hit = (node_class == INTERIOR) & (nb >= 0)
        if not hit.any():
            continue
        # |(x, y) + s*dx*(dj, di)| = radius; smallest root in (0, 1]
        x, y = X[hit], Y[hit]
        radius = np.where(nb[hit] == 0, R, rho)
        b = (dj * x + di * y) / dx
        c = (x * x + y * y - radius * radius) / dx**2
        disc = np.sqrt(np.maximum(b * b - c, 0.0))
        lo, hi = -b - disc, -b + disc
        s = np.where(lo > 0, lo, hi)
        arm[d][hit] = np.clip(s, _MIN_ARM, 1.0)

    ny, nx = node_class.shape
    k = spec.k
    return GridDomain(
        origin=(float(ticks[0]), float(ticks[0])),
        spacing=dx,
        node_class=_readonly(node_class),
        k=k,
        arm=_readonly(arm),
        annulus=spec,
    )


def label_from_mask(mask, origin=(0.0, 0.0), spacing: float = 1.0) -> GridDomain:
    """Build a domain from a boolean node mask (``True`` inside).

    The mask is padded with a one-node frame of outside nodes, so the returned
    grid is two nodes larger in each direction and its origin is shifted by
    ``-spacing``.  Complement components are found by 4-connected flood fill;
    the one touching the frame is the outer boundary (label 0), bounded ones
    are numbered 1..k by their (min row, min column).
    """
    mask = np.asarray(mask, dtype=bool)
    if mask.ndim != 2 or not mask.any():
        raise DomainError("mask must be a nonempty 2-D array with at least one inside node")
    inside = np.pad(mask, 1, constant_values=False)
    _check_connected(inside)

    comp, ncomp = ndimage.label(~inside)
    outer = comp[0, 0]
    holes = []
    for lab in range(1, ncomp + 1):
        if lab == outer:
            continue
        rows, cols = np.nonzero(comp == lab)
        first = int(np.argmin(rows * inside.shape[1] + cols))
        holes.append(((int(rows.min()), int(cols.min()), int(rows[first]), int(cols[first])), lab))
    holes.sort()
    relabel = np.zeros(ncomp + 1, dtype=np.int16)
    for j, (_, lab) in enumerate(holes, start=1):
        relabel[lab] = j

    node_class = np.full(inside.shape, EXTERIOR, dtype=np.int16)
    node_class[inside] = INTERIOR
    node_class = _boundary_labels(node_class, relabel[comp])
    ox, oy = origin
    return GridDomain(
        origin=(float(ox) - spacing, float(oy) - spacing),
        spacing=float(spacing),
        node_class=_readonly(node_class),
        k=len(holes),
        arm=_readonly(np.ones((4,) + inside.shape)),
    )


def read_mask(path) -> GridDomain:
    """Read a text mask file.

    Line 1 holds ``nx ny x0 y0 dx``; then ``ny`` lines of ``nx`` characters,
    ``I`` for inside and ``O`` for outside.  Line ``j`` of the body is grid row
    ``j`` (``y = y0 + j*dx``).
    """
    lines = Path(path).read_text().splitlines()
    if not lines:
        raise DomainError(f"{path}:1: empty mask file")
    head = lines[0].split()
    try:
        nx, ny = int(head[0]), int(head[1])
        x0, y0, dx = (float(v) for v in head[2:5])
        if len(head) != 5:
            raise ValueError
    except (ValueError, IndexError):
        raise DomainError(f"{path}:1: expected 'nx ny x0 y0 dx', got {lines[0]!r}") from None
    if nx <= 0 or ny <= 0 or dx <= 0:
        raise DomainError(f"{path}:1: nx, ny and dx must be positive")
    body = lines[1 : 1 + ny]
    if len(body) < ny:
        raise DomainError(f"{path}:{len(lines) + 1}: expected {ny} mask rows, found {len(body)}")
    mask = np.zeros((ny, nx), dtype=bool)
    for j, row in enumerate(body):
        lineno = j + 2
        if len(row) != nx:
            raise DomainError(f"{path}:{lineno}: expected {nx} characters, found {len(row)}")
        bad = set(row) - {"I", "O"}
        if bad:
            raise DomainError(f"{path}:{lineno}: invalid characters {''.join(sorted(bad))!r}")
        mask[j] = [ch == "I" for ch in row]
    return label_from_mask(mask, origin=(x0, y0), spacing=dx)


def write_mask(path, mask, origin=(0.0, 0.0), spacing: float = 1.0) -> None:
    mask = np.asarray(mask, dtype=bool)
    ny, nx = mask.shape
    rows = ["".join("I" if v else "O" for v in row) for row in mask]
    text = f"{nx} {ny} {origin[0]!r} {origin[1]!r} {spacing!r}\n" + "\n".join(rows) + "\n"
    Path(path).write_text(text)
