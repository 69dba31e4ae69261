"""Command-line front end.

Commands: ``potential``, ``sweep``, ``bounds``, ``slope`` and ``laplacian``.
Exit status is 0 on success, 2 for configuration errors and 3 for numerical
failures.  CSV and JSON floats are written with 17 significant digits so that
identical configurations produce identical bytes.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from .bounds import annulus_report, grid_report, slope_extract, to_json
from .domain import AnnulusSpec, rasterize_annulus, read_mask
from .errors import DomainError, EigenError, HypothesisError, SolverError, WindowError
from .field import grid_dirichlet_groundstate, harmonic_basis, read_grid_field, trace_from_flux
from .radial import RadialField, RadialFluxModel, psi_of_C, read_field_table
from .spectral import SpectralConfig, dirichlet_laplacian_groundstate, kappa_sweep, pauli_groundstate
from .svg import Series, line_chart

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
FIG1_DASH = ("dashed", "solid", "dotted")
SAMPLES = 401
DEFAULT_ANNULUS = (0.5, 1.0)


class ConfigError(Exception):
    pass


def _fmt(x) -> str:
    return "%.17g" % x


def _float_list(text: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _c_value(text: str):
    if text == "crit":
        return text
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--C takes a number or 'crit', got {text!r}") from None


def _shared() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    geo = p.add_mutually_exclusive_group()
    geo.add_argument("--annulus", nargs=2, type=float, metavar=("RHO", "R"), help="annulus radii (RHO=0: disk); default 0.5 1")
    geo.add_argument("--mask", type=Path, metavar="PATH", help="mask file of a rasterized domain")
    fld = p.add_mutually_exclusive_group()
    fld.add_argument("--B", type=float, default=None, metavar="CONST", help="constant magnetic field (default 1)")
    fld.add_argument("--B-table", type=Path, metavar="PATH", help="radial field table, CSV with header r,B")
    fld.add_argument("--B-grid", type=Path, metavar="PATH", help="nodal field values on the mask grid, CSV")
    p.add_argument("--h", type=_float_list, metavar="LIST", help="comma-separated semiclassical parameters")
    par = p.add_mutually_exclusive_group()
    par.add_argument("--kappa", type=_float_list, metavar="LIST", help="solenoid strengths (annulus)")
    par.add_argument("--flux", type=_float_list, metavar="LIST", help="circulations; a k-vector on a mask")
    p.add_argument("--grid-n", type=int, metavar="N", help="grid points per unit length for rasterized annuli")
    p.add_argument("--m-window", nargs="+", metavar="LO HI|auto", help="angular momentum window")
    p.add_argument("--n-r", type=int, default=None, metavar="N", help="radial intervals of the eigensolver")
    p.add_argument("--threads", type=int, default=1, metavar="N")
    p.add_argument("--out", default="pauliflux", metavar="PREFIX", help="output file prefix")
    p.add_argument("--svg", type=Path, metavar="PATH")
    return p


def build_parser() -> argparse.ArgumentParser:
    shared = _shared()
    parser = argparse.ArgumentParser(prog="pauliflux", description="Pauli ground energies with Aharonov-Bohm flux")
    sub = parser.add_subparsers(dest="command", required=True)

    pot = sub.add_parser("potential", parents=[shared], help="generating function, oscillation, flux conversions")
    pot.add_argument("--C", type=_c_value, action="append", metavar="C|crit", help="log-coefficient (repeatable)")
    pot.add_argument("--traces", type=_float_list, metavar="LIST", help="hole traces on a mask domain")

    sw = sub.add_parser("sweep", parents=[shared], help="kappa sweep of the sector ground energies")
    sw.add_argument("--kappa-range", nargs=2, type=float, metavar=("LO", "HI"), help="default [-1.5h, 1.5h]")
    sw.add_argument("--points", type=int, default=61)

    bd = sub.add_parser("bounds", parents=[shared], help="bound report")
    bd.add_argument("--eta", type=float, default=None, help="cutoff distance of the quasimode")
    bd.add_argument("--variant", choices=("plain", "sinh"), default="plain")
    bd.add_argument("--window", type=int, default=2, help="half-width of the gauge search box")
    bd.add_argument("--distance-C", type=float, default=None, help="constant of the distance-form bound")

    sub.add_parser("slope", parents=[shared], help="decay rate from eigenvalues over an h list")
    sub.add_parser("laplacian", parents=[shared], help="Dirichlet Laplacian ground energy")
    return parser


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def _radial_field(args) -> RadialField:
    if args.B_grid is not None:
        raise ConfigError("--B-grid needs a --mask geometry")
    if args.B_table is not None:
        return read_field_table(args.B_table)
    return RadialField.constant(1.0 if args.B is None else args.B)


def _grid_field(args, domain):
    if args.B_table is not None:
        raise ConfigError("--B-table describes a radial field; use --B-grid with --mask")
    if args.B_grid is not None:
        return read_grid_field(args.B_grid)
    return 1.0 if args.B is None else args.B


def _annulus(args) -> tuple[float, float]:
    if args.mask is not None:
        raise ConfigError(f"'{args.command}' with a mask is not supported; it needs --annulus RHO R")
    rho, R = args.annulus if args.annulus is not None else DEFAULT_ANNULUS
    AnnulusSpec(rho, R)
    return rho, R


def _h_list(args) -> list[float]:
    if not args.h:
        raise ConfigError("--h is required")
    if any(h <= 0 for h in args.h):
        raise ConfigError("every h must be positive")
    return args.h


def _m_window(args):
    if args.m_window is None or args.m_window == ["auto"]:
        return None
    try:
        lo, hi = (int(v) for v in args.m_window)
    except ValueError:
        raise ConfigError("--m-window takes two integers LO HI or 'auto'") from None
    if lo > hi:
        raise ConfigError("--m-window needs LO <= HI")
    return lo, hi


def _constant_b0(args) -> float:
    if args.B_table is not None or args.B_grid is not None:
        raise ConfigError(f"'{args.command}' needs a constant field (--B)")
    return 1.0 if args.B is None else args.B


# potential ------------------------------------------------------------------


def _potential_annulus(args) -> int:
    rho, R = _annulus(args)
    field = _radial_field(args)
    model = RadialFluxModel(rho, R, field) if rho > 0 else None
    if args.traces or args.flux or args.kappa:
        if model is None:
            raise ConfigError("the disk has no hole: traces, flux and kappa do not apply")
        if args.C:
            raise ConfigError("give only one of --C, --traces, --kappa, --flux")
    if rho == 0:
        cs = [0.0]
    elif args.kappa:
        cs = list(args.kappa)
    elif args.flux:
        cs = [model.c_from_flux(f) for f in args.flux]
    elif args.traces:
        cs = [model.c_from_trace(p) for p in args.traces]
    else:
        cs = [model.c0 if c == "crit" else c for c in (args.C or ["crit"])]

    psis = [psi_of_C(c, field, rho, R) for c in cs]
    summary = {"rho": rho, "R": R, "field_constant": field.is_constant, "entries": []}
    if model is not None:
        summary["C_crit"] = model.c0
        summary["phi0"] = float(model.phi0[0])
        summary["osc0"] = model.osc0
        summary["two_inf_psi0"] = 2 * model.psi0.psi_min
    for psi in psis:
        entry = {
            "C": psi.C,
            "trace": psi.trace,
            "flux": model.flux_from_c(psi.C) if model else 0.0,
            "psi_min": psi.psi_min,
            "psi_max": psi.psi_max,
            "osc": psi.osc,
            "argmin_r": psi.argmin_r,
            "branch": psi.branch.name,
        }
        summary["entries"].append(entry)
        print(
            f"C={_fmt(psi.C)} trace={_fmt(entry['trace'])} flux={_fmt(entry['flux'])} "
            f"psi_min={_fmt(psi.psi_min)} psi_max={_fmt(psi.psi_max)} osc={_fmt(psi.osc)} branch={psi.branch.name}"
        )
    _write(Path(f"{args.out}_potential.json"), to_json(summary))

    r = rho + (R - rho) * np.arange(SAMPLES) / (SAMPLES - 1)
    if rho == 0:
        r[0] = 0.0
    lines = ["r," + ",".join(f"psi_C{i}" for i in range(len(psis)))]
    cols = [psi(r) for psi in psis]
    lines += [",".join([_fmt(r[i])] + [_fmt(c[i]) for c in cols]) for i in range(SAMPLES)]
    _write(Path(f"{args.out}_psi.csv"), "\n".join(lines) + "\n")

    if model is not None:
        fig_cs = (-0.5, model.c0, -rho * rho / 2)
        fig = [psi_of_C(c, field, rho, R)(r) for c in fig_cs]
        lines = ["r,psi_C_minus_half,psi_C_crit,psi_C_minus_rho2_half"]
        lines += [",".join([_fmt(r[i])] + [_fmt(c[i]) for c in fig]) for i in range(SAMPLES)]
        _write(Path(f"{args.out}_fig1.csv"), "\n".join(lines) + "\n")

    if args.svg is not None:
        series = [
            Series(tuple(r), tuple(col), f"C = {psi.C:.6g}", FIG1_DASH[i % 3], color="#000000")
            for i, (psi, col) in enumerate(zip(psis, cols))
        ]
        _write(args.svg, line_chart(series, title="generating function", xlabel="r", ylabel="psi"))

    if args.grid_n is not None:
        if not field.is_constant:
            raise ConfigError("--grid-n with a radial table is not supported; use --mask with --B-grid")
        dom = rasterize_annulus(AnnulusSpec(rho, R), args.grid_n)
        basis = harmonic_basis(dom, field.B0)
        psi = basis.psi_from_trace([psis[0].trace] if dom.k else [])
        _write_grid_psi(Path(f"{args.out}_grid_psi.csv"), psi)
        print(f"grid n={args.grid_n}: psi_min={_fmt(psi.psi_min)} osc={_fmt(psi.osc)}")
    return 0


def _write_grid_psi(path: Path, psi) -> None:
    X, Y = psi.domain.coords()
    closure = psi.domain.closure
    lines = ["x,y,psi"]
    for i, j in zip(*np.nonzero(closure)):
        lines.append(f"{_fmt(X[i, j])},{_fmt(Y[i, j])},{_fmt(psi.values[i, j])}")
    _write(path, "\n".join(lines) + "\n")


def _mask_basis(args):
    dom = read_mask(args.mask)
    return dom, harmonic_basis(dom, _grid_field(args, dom))


def _potential_mask(args) -> int:
    dom, basis = _mask_basis(args)
    if args.C:
        raise ConfigError("--C applies to annuli; use --traces or --flux on a mask")
    if args.traces is not None and args.flux is not None:
        raise ConfigError("give only one of --traces and --flux")
    if args.flux is not None:
        p = trace_from_flux(basis, args.flux)
    elif args.traces is not None:
        p = np.asarray(args.traces, dtype=float)
    else:
        p = np.zeros(dom.k)
    if p.shape != (dom.k,):
        raise ConfigError(f"the mask has {dom.k} holes, got {p.size} values")
    psi = basis.psi_from_trace(p)
    flux = basis.phi0 + basis.M @ p
    summary = {
        "k": dom.k,
        "traces": p.tolist(),
        "flux": flux.tolist(),
        "phi0": basis.phi0.tolist(),
        "M": basis.M.tolist(),
        "psi_min": psi.psi_min,
        "psi_max": psi.psi_max,
        "osc": psi.osc,
        "osc0": basis.osc0,
    }
    print(f"k={dom.k} psi_min={_fmt(psi.psi_min)} psi_max={_fmt(psi.psi_max)} osc={_fmt(psi.osc)}")
    _write(Path(f"{args.out}_potential.json"), to_json(summary))
    _write_grid_psi(Path(f"{args.out}_grid_psi.csv"), psi)
    return 0


def cmd_potential(args) -> int:
    if args.mask is not None:
        return _potential_mask(args)
    return _potential_annulus(args)


# sweep ----------------------------------------------------------------------


def _h_tag(h: float) -> str:
    return f"{h:g}"


def cmd_sweep(args) -> int:
    rho, R = _annulus(args)
    if rho == 0:
        raise ConfigError("the sweep needs an annulus (RHO > 0)")
    B0 = _constant_b0(args)
    hs = _h_list(args)
    window = _m_window(args)
    if args.flux is not None:
        raise ConfigError("sweep takes --kappa or --kappa-range")
    if args.points < 2 and args.kappa is None:
        raise ConfigError("--points must be at least 2")
    for h in hs:
        if args.kappa is not None:
            kappas = np.asarray(args.kappa)
        else:
            lo, hi = args.kappa_range if args.kappa_range else (-1.5 * h, 1.5 * h)
            kappas = np.linspace(lo, hi, args.points)
        cfg = SpectralConfig(h, 0.0, window, args.n_r or 2048, B0=B0)
        res = kappa_sweep(cfg, kappas, rho, R, workers=args.threads)
        tag = _h_tag(h) if len(hs) > 1 else None
        prefix = args.out + (f"_h{tag}" if tag else "")
        rows = ["kappa,m,lambda"] + [f"{_fmt(k)},{m},{_fmt(v)}" for k, m, v in res.rows()]
        env = ["kappa,lambda_min,m_star"] + [f"{_fmt(k)},{_fmt(v)},{m}" for k, v, m in res.envelope()]
        _write(Path(f"{prefix}_sweep.csv"), "\n".join(rows) + "\n")
        _write(Path(f"{prefix}_envelope.csv"), "\n".join(env) + "\n")
        mstars = sorted(set(int(m) for m in res.m_star))
        print(
            f"h={_fmt(h)} m-window=[{res.ms[0]}, {res.ms[-1]}] minimizing m in {mstars} "
            f"lambda_min range [{_fmt(res.lambda_min.min())}, {_fmt(res.lambda_min.max())}]"
        )
        if args.svg is not None:
            svg = args.svg if tag is None else args.svg.with_name(f"{args.svg.stem}_h{tag}{args.svg.suffix}")
            _write(svg, _sweep_svg(res, h))
    return 0


def _sweep_svg(res, h: float) -> str:
    # only sectors that come near the envelope are drawn, as in the figures
    top = float(res.lambda_min.max())
    floor = float(res.lambda_min.min())
    cap = top + 2 * (top - floor) + 1e-300
    dashes = ("solid", "dashed", "dotted")
    series = []
    for j, m in enumerate(res.ms):
        col = res.table[:, j]
        if col.min() > cap:
            continue
        y = tuple(float(v) if v <= cap else math.nan for v in col)
        series.append(Series(tuple(res.kappas.tolist()), y, f"m = {m}", dashes[len(series) % 3]))
    k0 = float(res.kappas[0])
    series.append(Series(tuple(res.kappas.tolist()), tuple(res.lambda_min.tolist()), "", "solid", "#000000", 2.4))
    period = [k0 + h * i for i in range(int((res.kappas[-1] - k0) / h + 1e-9) + 1)]
    return line_chart(series, title=f"h = {h:g}", xlabel="kappa", ylabel="lambda", vlines=period[:2])


# bounds ---------------------------------------------------------------------


def cmd_bounds(args) -> int:
    hs = _h_list(args)
    opts = dict(eta=args.eta, variant=args.variant, window=args.window, distance_C=args.distance_C)
    reports = []
    if args.mask is not None:
        dom, basis = _mask_basis(args)
        if args.kappa is not None:
            raise ConfigError("a mask takes --flux (a k-vector), not --kappa")
        flux = basis.phi0 if args.flux is None else np.asarray(args.flux)
        if flux.shape != (dom.k,):
            raise ConfigError(f"the mask has {dom.k} holes, got {flux.size} flux values")
        for h in hs:
            reports.append(grid_report(basis, flux, h, **opts))
    else:
        rho, R = _annulus(args)
        field = _radial_field(args)
        n_r = args.n_r or 2048
        if rho == 0:
            params = [("kappa", 0.0)]
        elif args.flux is not None:
            params = [("flux", f) for f in args.flux]
        else:
            params = [("kappa", k) for k in (args.kappa or [0.0])]
        for h in hs:
            for name, val in params:
                reports.append(annulus_report(rho, R, h, field=field, n_r=n_r, **{name: val}, **opts))
    for rep in reports:
        checks = {k: v for k, v in rep.flags.items() if isinstance(v, str)}
        print(f"h={_fmt(rep.h)} flux={rep.flux} " + " ".join(f"{k}={v}" for k, v in checks.items()))
    doc = reports[0].as_dict() if len(reports) == 1 else [r.as_dict() for r in reports]
    _write(Path(f"{args.out}_bounds.json"), to_json(doc))
    return 0


# slope ----------------------------------------------------------------------


def cmd_slope(args) -> int:
    rho, R = _annulus(args)
    if rho == 0:
        raise ConfigError("the eigensolver needs an annulus (RHO > 0)")
    B0 = _constant_b0(args)
    hs = sorted(_h_list(args), reverse=True)
    if args.flux is not None:
        kappa = RadialFluxModel(rho, R, RadialField.constant(B0)).c_from_flux(args.flux[0])
    else:
        kappa = (args.kappa or [0.0])[0]
    n_r = args.n_r or 4096
    table = []
    for h in hs:
        res = pauli_groundstate(SpectralConfig(h, kappa, _m_window(args), n_r, B0=B0), rho, R)
        table.append((h, res.lambda_min))
        print(f"h={_fmt(h)} m_star={res.m_star} lambda_min={_fmt(res.lambda_min)}")
    model = RadialFluxModel(rho, R, RadialField.constant(B0))
    est = slope_extract(table, target=2 * model.psi0.psi_min)
    doc = est.as_dict()
    doc["kappa"] = kappa
    doc["lambdas"] = [list(t) for t in table]
    print(f"limit_estimate={_fmt(est.limit_estimate)} target={_fmt(est.target)}")
    _write(Path(f"{args.out}_slope.json"), to_json(doc))
    return 0


# laplacian ------------------------------------------------------------------


def cmd_laplacian(args) -> int:
    if args.mask is not None:
        dom = read_mask(args.mask)
        lam = grid_dirichlet_groundstate(dom)
        doc = {"geometry": "mask", "lambda_dirichlet": lam}
    else:
        rho, R = _annulus(args)
        lam = dirichlet_laplacian_groundstate(rho, R, args.n_r or 4096)
        doc = {"geometry": "annulus" if rho > 0 else "disk", "rho": rho, "R": R, "lambda_dirichlet": lam}
        if args.grid_n is not None:
            doc["lambda_dirichlet_grid"] = grid_dirichlet_groundstate(rasterize_annulus(AnnulusSpec(rho, R), args.grid_n))
    print(f"lambda_dirichlet={_fmt(lam)}")
    _write(Path(f"{args.out}_laplacian.json"), to_json(doc))
    return 0


COMMANDS = {
    "potential": cmd_potential,
    "sweep": cmd_sweep,
    "bounds": cmd_bounds,
    "slope": cmd_slope,
    "laplacian": cmd_laplacian,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.threads < 1:
            raise ConfigError("--threads must be at least 1")
        return COMMANDS[args.command](args)
    except (ConfigError, DomainError, HypothesisError, ValueError, OSError) as exc:
        print(f"pauliflux: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SolverError, EigenError, WindowError) as exc:
        print(f"pauliflux: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
