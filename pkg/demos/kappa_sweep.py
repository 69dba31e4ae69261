"""Sector ground energies against the solenoid strength at h = 0.1.

The lower envelope is h-periodic in kappa; the minimizing angular momentum
steps by one each period.

    python3 demos/kappa_sweep.py [out.svg]
"""

import sys

import numpy as np

from pauliflux import SpectralConfig, kappa_sweep
from pauliflux.svg import Series, line_chart

h = 0.1
kappas = np.linspace(-1.5 * h, 1.5 * h, 61)
res = kappa_sweep(SpectralConfig(h), kappas)

for kappa, lam, m in list(res.envelope())[::10]:
    print(f"kappa = {kappa:+.3f}  lambda_min = {lam:.6f}  m* = {m}")

spread = np.ptp(res.lambda_min[:21] - res.lambda_min[20:41])
print(f"envelope shift by one period changes values by at most {spread:.2e}")

series = [
    Series(tuple(kappas), tuple(res.table[:, j]), "", "dotted", "#999999", 0.8)
    for j in range(res.table.shape[1])
]
series.append(Series(tuple(kappas), tuple(res.lambda_min), "lower envelope", "solid", "#b22222", 2.0))
hi = np.percentile(res.table, 15)
series = [Series(s.x, tuple(np.where(np.asarray(s.y) <= hi, s.y, np.nan)), s.label, s.dash, s.color, s.width) for s in series]
out = sys.argv[1] if len(sys.argv) > 1 else "kappa_sweep.svg"
with open(out, "w") as fh:
    fh.write(line_chart(series, f"sector energies, h = {h}", "kappa", "lambda", vlines=(-h, 0.0, h)))
print("wrote", out)
