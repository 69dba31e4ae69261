"""Exponential decay rate of the ground energy as h shrinks.

Pair slopes of log(lambda) against 1/h approach twice the minimum of the
zero-flux generating function.

    python3 demos/decay_rate.py
"""

from pauliflux import RadialFluxModel, SpectralConfig, pauli_groundstate, slope_extract

target = 2 * RadialFluxModel(0.5).psi0.psi_min
table = []
for h in (0.04, 0.02, 0.01, 0.005):
    res = pauli_groundstate(SpectralConfig(h, n_r=4096))
    table.append((h, res.lambda_min))
    print(f"h = {h:<6} m* = {res.m_star:3d}  lambda = {res.lambda_min:.6e}")

est = slope_extract(table, target)
for (h1, h2), s, raw in zip(est.h_pairs, est.slopes, est.raw_slopes):
    print(f"pair ({h1}, {h2}): slope {s:+.6f}   plain quotient {raw:+.6f}")
print(f"limit estimate {est.limit_estimate:+.6f} against {target:+.6f}")
