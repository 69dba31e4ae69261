"""Lower and upper bounds around the computed ground energy on the annulus.

For a few values of h the gauge-optimized lower bound, the numerical
eigenvalue and the quasimode upper bound are printed side by side.

    python3 demos/bounds_sandwich.py
"""

from pauliflux import annulus_report

print(f"{'h':>6} {'kappa':>6} {'basic':>11} {'gauge':>11} {'numeric':>11} {'upper':>11}")
for h in (0.2, 0.1, 0.05):
    for kappa in (0.0, 0.05):
        rep = annulus_report(0.5, 1.0, h, kappa=kappa)
        print(
            f"{h:6.3f} {kappa:6.3f} {rep.lower_basic:11.4e} {rep.lower_gauge:11.4e} "
            f"{rep.lambda_numeric:11.4e} {rep.upper_quasimode:11.4e}"
        )
        failed = [k for k, v in rep.flags.items() if v == "FAIL"]
        if failed:
            print("   ordering failures:", failed)
