"""Radial generating functions on the annulus 0.5 < r < 1 for three log-coefficients.

Shows how the oscillation of psi depends on C and where the critical
coefficient sits, then writes an SVG of the three profiles.

    python3 demos/potential_profiles.py [out.svg]
"""

import sys

import numpy as np

from pauliflux import c_crit, psi_of_C
from pauliflux.svg import Series, line_chart

rho = 0.5
cc = c_crit(rho)
r = np.linspace(rho, 1.0, 401)

curves = []
for C, dash in ((-0.5, "dashed"), (cc, "solid"), (-rho**2 / 2, "dotted")):
    psi = psi_of_C(C, rho=rho)
    print(f"C = {C:+.6f}  min psi = {psi.psi_min:+.6f}  osc = {psi.osc:.6f}  inner trace = {psi.trace:+.6f}")
    curves.append(Series(tuple(r), tuple(psi(r)), f"C = {C:.4f}", dash))

print(f"critical coefficient for rho = {rho}: {cc:.6f}")

out = sys.argv[1] if len(sys.argv) > 1 else "potential_profiles.svg"
with open(out, "w") as fh:
    fh.write(line_chart(curves, "generating functions", "r", "psi"))
print("wrote", out)
