"""Radial generating functions on the annulus.

A radial solution of ``Δψ = B`` on ``rho < r < R`` vanishing at ``r = R`` is
fixed by one number, the log-coefficient ``C``.  For a constant field ``B0``

    ψ(r) = B0 (r² - R²)/4 + C log(r/R),

and the inner trace ``p = ψ(rho)`` and the circulation ``Φ`` along the inner
circle are affine in ``C``:

    p = B0 (rho² - R²)/4 + C log(rho/R),     Φ = 2πC + π B0 rho².

``C`` is also the strength of the Aharonov-Bohm solenoid in the potential
``A = (B0/2)(-x2, x1) + C (-x2, x1)/r²``, which is the ``κ`` of
:mod:`pauliflux.spectral`.

For tabulated radial fields ``B(r)`` the same ``C`` is used with
``r ψ'(r) = C + B(rho) rho²/2 + ∫_rho^r s B(s) ds``, i.e. the field is
continued by its inner value into the hole; this reduces to the closed form
for constant tables.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

__all__ = [
    "Branch",
    "RadialField",
    "RadialGeneratingFunction",
    "RadialFluxModel",
    "psi_of_C",
    "oscillation_branches",
    "c_crit",
    "trace_from_c",
    "c_from_trace",
    "flux_from_c",
    "c_from_flux",
    "read_field_table",
]

# minimum number of panels for tabulated fields
TABLE_PANELS = 4096


class Branch(enum.Enum):
    NO_INTERIOR_MIN_HIGH_C = "no_interior_min_high_c"
    NO_INTERIOR_MIN_LOW_C = "no_interior_min_low_c"
    INTERIOR_MIN = "interior_min"


@dataclass(frozen=True)
class RadialField:
    """Radial magnetic field: a constant ``B0`` or a piecewise-linear table."""

    B0: float | None = 1.0
    r: tuple[float, ...] | None = None
    B: tuple[float, ...] | None = None

    @classmethod
    def constant(cls, B0: float = 1.0) -> RadialField:
        return cls(B0=float(B0))

    @classmethod
    def table(cls, r, B) -> RadialField:
        r = np.asarray(r, dtype=float)
        B = np.asarray(B, dtype=float)
        if r.ndim != 1 or r.shape != B.shape or r.size < 2:
            raise ValueError("table needs matching 1-D arrays with at least two rows")
        if np.any(np.diff(r) <= 0):
            raise ValueError("table abscissae must be strictly increasing")
        return cls(B0=None, r=tuple(r.tolist()), B=tuple(B.tolist()))

    @property
    def is_constant(self) -> bool:
        return self.r is None

    def __call__(self, r):
        if self.is_constant:
            return np.full(np.shape(r), self.B0, dtype=float)
        return np.interp(r, self.r, self.B)

    def covers(self, rho: float, R: float) -> bool:
        return self.is_constant or (self.r[0] <= rho and self.r[-1] >= R)

    def positive(self, rho: float, R: float) -> bool:
        if self.is_constant:
            return self.B0 > 0
        rr = np.asarray(self.r)
        inside = (rr >= rho) & (rr <= R)
        vals = np.concatenate([np.asarray(self.B)[inside], self(np.array([rho, R]))])
        return bool(np.all(vals > 0))


def read_field_table(path) -> RadialField:
    """Read a CSV radial field table with header ``r,B``."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["r", "B"]:
            raise ValueError(f"{path}:1: expected header 'r,B'")
        rs, bs = [], []
        for lineno, row in enumerate(reader, start=2):
            if not row or not "".join(row).strip():
                continue
            try:
                r, b = (float(v) for v in row)
            except ValueError:
                raise ValueError(f"{path}:{lineno}: expected two numbers, got {row!r}") from None
            if rs and r <= rs[-1]:
                raise ValueError(f"{path}:{lineno}: r must be strictly increasing")
            rs.append(r)
            bs.append(b)
    return RadialField.table(rs, bs)


@dataclass(frozen=True, eq=False)
class RadialGeneratingFunction:
    """Radial ψ with its extrema; call it to evaluate ψ(r)."""

    C: float
    rho: float
    R: float
    field: RadialField
    psi_min: float
    psi_max: float
    argmin_r: float
    branch: Branch
    _table: tuple[np.ndarray, np.ndarray, np.ndarray] | None = field(default=None, repr=False)

    @property
    def osc(self) -> float:
        return self.psi_max - self.psi_min

    @property
    def trace(self) -> float:
        """Value on the inner circle."""
        return float(self(self.rho)) if self.rho > 0 else self.psi_min

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        if self._table is None:
            B0 = self.field.B0
            with np.errstate(divide="ignore"):
                log = np.log(r / self.R) if self.C != 0 else 0.0
            return B0 * (r * r - self.R**2) / 4 + self.C * log
        rr, psi, _ = self._table
        return np.interp(r, rr, psi)

    def derivative(self, r):
        r = np.asarray(r, dtype=float)
        if self._table is None:
            return self.field.B0 * r / 2 + (self.C / r if self.C != 0 else 0.0)
        rr, _, dpsi = self._table
        return np.interp(r, rr, dpsi)

    def grad_max(self) -> float:
        """Sup of |ψ'| on [rho, R]."""
        if self._table is not None:
            return float(np.abs(self._table[2]).max())
        ends = np.abs(self.derivative(np.array([max(self.rho, 1e-300), self.R])))
        return float(ends.max())


def _check_radii(C: float, rho: float, R: float) -> None:
    if not (0 <= rho < R):
        raise DomainError(f"need 0 <= rho < R, got rho={rho}, R={R}")
    if rho == 0 and C != 0:
        raise DomainError("rho = 0 (disk) requires C = 0: log r is singular at the origin")


def psi_of_C(C: float, field: RadialField | None = None, rho: float = 0.5, R: float = 1.0) -> RadialGeneratingFunction:
    """Radial generating function with log-coefficient ``C`` and ψ(R) = 0.

    Extrema follow from the sign of ``r ψ'(r)``, which is increasing when
    ``B > 0``: the minimum is at ``rho`` when ``r ψ'`` is already nonnegative
    there, at ``R`` when it is still nonpositive there, and at the unique
    critical radius otherwise.
    """
    field = RadialField.constant(1.0) if field is None else field
    _check_radii(C, rho, R)
    if not field.covers(rho, R):
        raise ValueError(f"field table does not cover [{rho}, {R}]")
    if field.is_constant:
        return _psi_constant(float(C), field, rho, R)
    return _psi_table(float(C), field, rho, R)


def _psi_constant(C, field, rho, R):
    B0 = field.B0
    if B0 < 0:
        raise ValueError("constant field must be nonnegative")
    p = B0 * (rho * rho - R * R) / 4 + (C * math.log(rho / R) if C != 0 else 0.0)
    if C >= -B0 * rho * rho / 2:
        branch, psi_min, psi_max, arg = Branch.NO_INTERIOR_MIN_HIGH_C, p, 0.0, rho
    elif C <= -B0 * R * R / 2:
        branch, psi_min, psi_max, arg = Branch.NO_INTERIOR_MIN_LOW_C, 0.0, p, R
    else:
        r2 = -2 * C / B0
        psi_min = -C / 2 - B0 * R * R / 4 + (C / 2) * math.log(r2 / (R * R))
        branch, psi_max, arg = Branch.INTERIOR_MIN, max(0.0, p), math.sqrt(r2)
    return RadialGeneratingFunction(C, rho, R, field, psi_min, psi_max, arg, branch)


def _cumtrapz(y, x):
    out = np.zeros_like(y)
    out[1:] = np.cumsum(0.5 * (y[1:] + y[:-1]) * np.diff(x))
    return out


def _psi_table(C, field, rho, R):
    rr = np.unique(np.concatenate([np.linspace(rho, R, TABLE_PANELS + 1), np.clip(field.r, rho, R)]))
    B = field(rr)
    g = C + field(rho) * rho * rho / 2 + _cumtrapz(rr * B, rr)  # r ψ'(r)
    dpsi = np.empty_like(g)
    if rho > 0:
        dpsi[:] = g / rr
    else:
        dpsi[1:] = g[1:] / rr[1:]
        dpsi[0] = 0.0
    # ψ(r) = -∫_r^R ψ'(s) ds
    psi = _cumtrapz(dpsi, rr)
    psi -= psi[-1]

    if g[0] >= 0:
        branch = Branch.NO_INTERIOR_MIN_HIGH_C
    elif g[-1] <= 0:
        branch = Branch.NO_INTERIOR_MIN_LOW_C
    else:
        branch = Branch.INTERIOR_MIN
    i = int(np.argmin(psi))
    return RadialGeneratingFunction(
        C, rho, R, field, float(psi[i]), float(psi.max()), float(rr[i]), branch, _table=(rr, psi, dpsi)
    )


def oscillation_branches(C: float, rho: float) -> float:
    """Oscillation of ``r²/4 - 1/4 + C log r`` on ``[rho, 1]`` from the three branch formulas."""
    p = rho * rho / 4 - 0.25 + C * math.log(rho)
    if C >= -rho * rho / 2:
        return -p
    if C <= -0.5:
        return p
    return max(0.0, p) + C / 2 + 0.25 - (C / 2) * math.log(-2 * C)


def c_crit(rho: float, R: float = 1.0, B0: float = 1.0) -> float:
    """Log-coefficient for which ψ vanishes on both circles (minimal oscillation)."""
    if not (0 < rho < R):
        raise DomainError(f"need 0 < rho < R, got rho={rho}, R={R}")
    return B0 * (R * R - rho * rho) / (4 * math.log(rho / R))


def trace_from_c(C: float, rho: float, R: float = 1.0, B0: float = 1.0) -> float:
    return B0 * (rho * rho - R * R) / 4 + C * math.log(rho / R)


def c_from_trace(p: float, rho: float, R: float = 1.0, B0: float = 1.0) -> float:
    return (p - B0 * (rho * rho - R * R) / 4) / math.log(rho / R)


def flux_from_c(C: float, rho: float, B0: float = 1.0) -> float:
    """Circulation along the inner circle (counterclockwise)."""
    return 2 * math.pi * C + math.pi * B0 * rho * rho


def c_from_flux(flux: float, rho: float, B0: float = 1.0) -> float:
    return (flux - math.pi * B0 * rho * rho) / (2 * math.pi)


class RadialFluxModel:
    """Annulus flux model exposing the same surface as a grid harmonic basis.

    ``phi0`` is the circulation of the generating function with zero traces;
    ``oscillation_at`` and ``psi_at`` take a length-1 flux vector.  With
    ``rho = 0`` (the disk) there is no hole: ``k = 0`` and ``phi0`` is empty.
    """

    def __init__(self, rho: float, R: float = 1.0, field: RadialField | None = None):
        if not (0 <= rho < R):
            raise DomainError(f"need 0 <= rho < R, got rho={rho}, R={R}")
        self.rho, self.R = float(rho), float(R)
        self.field = RadialField.constant(1.0) if field is None else field
        self.k = 1 if rho > 0 else 0
        self._inner_b = self.field.B0 if self.field.is_constant else float(self.field(rho))
        if rho == 0:
            self.c0 = 0.0
        elif self.field.is_constant:
            self._t0, self._slope = trace_from_c(0.0, rho, R, self.field.B0), math.log(rho / R)
            self.c0 = c_crit(rho, R, self.field.B0)
        else:
            # ψ(rho) is affine in C; the slope is taken from the quadrature
            # itself so that the zero-trace solution is exact for the table
            self._t0 = psi_of_C(0.0, self.field, rho, R).trace
            self._slope = psi_of_C(1.0, self.field, rho, R).trace - self._t0
            self.c0 = -self._t0 / self._slope
        self.phi0 = np.array([self.flux_from_c(self.c0)]) if self.k else np.zeros(0)
        self.psi0 = psi_of_C(self.c0, self.field, rho, R)
        self.osc0 = self.psi0.osc

    def flux_from_c(self, C: float) -> float:
        return 2 * math.pi * C + math.pi * self._inner_b * self.rho**2

    def c_from_flux(self, flux: float) -> float:
        return (flux - math.pi * self._inner_b * self.rho**2) / (2 * math.pi)

    def c_from_trace(self, p: float) -> float:
        if self.k == 0:
            raise DomainError("the disk has no inner trace")
        return (p - self._t0) / self._slope

    def psi_at(self, flux) -> RadialGeneratingFunction:
        flux = np.atleast_1d(np.asarray(flux, dtype=float))
        if self.k == 0:
            return self.psi0
        (phi,) = flux
        return psi_of_C(self.c_from_flux(phi), self.field, self.rho, self.R)

    def oscillation_at(self, flux) -> float:
        return self.psi_at(flux).osc
