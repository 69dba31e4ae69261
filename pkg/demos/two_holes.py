"""A disk with two holes: harmonic basis, circulation matrix and gauge choice.

    python3 demos/two_holes.py
"""

import numpy as np

from pauliflux import flux_from_trace, grid_report, harmonic_basis, label_from_mask

n = 96
y, x = np.mgrid[0:n, 0:n]
c = (n - 1) / 2
mask = (x - c) ** 2 + (y - c) ** 2 < (0.48 * n) ** 2
for dx in (-0.2 * n, 0.2 * n):
    mask &= (x - c - dx) ** 2 + (y - c) ** 2 >= (0.1 * n) ** 2

domain = label_from_mask(mask, origin=(-1.0, -1.0), spacing=2.0 / n)
basis = harmonic_basis(domain, 1.0)
print("holes:", basis.k)
print("circulation matrix:\n", basis.M)
print("eigenvalues:", np.linalg.eigvalsh(basis.M))
print(f"oscillation with zero traces: {basis.osc0:.6f}")

flux = flux_from_trace(basis, [0.05, -0.02])
rep = grid_report(basis, flux, 0.1)
print(f"circulations {flux}, optimal lattice shift {rep.flags['alpha_star']}")
print(f"lower bounds: basic {rep.lower_basic:.4e}, gauge {rep.lower_gauge:.4e}; upper {rep.upper_quasimode:.4e}")
