import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import optimize, special

from pauliflux import spectral
from pauliflux.errors import HypothesisError, WindowError
from pauliflux.radial import RadialField, c_crit, psi_of_C
from pauliflux.spectral import (
    SpectralConfig,
    auto_window,
    bessel_j0,
    dirichlet_laplacian_groundstate,
    j0_first_zero,
    kappa_sweep,
    lambda_m,
    lambdas_for,
    pauli_groundstate,
    pm_matrix,
    quasimode_upper_bound,
)


def bessel_cross_root(rho, R=1.0):
    """Smallest λ with J0(kρ)Y0(kR) = J0(kR)Y0(kρ), k = √λ, by scanning then bracketing."""

    def f(k):
        return special.j0(k * rho) * special.y0(k * R) - special.j0(k * R) * special.y0(k * rho)

    ks = np.linspace(0.1, 40, 4000)
    vals = f(ks)
    i = np.nonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0][0]
    k = optimize.brentq(f, ks[i], ks[i + 1], xtol=1e-15, rtol=1e-15)
    return k * k


def test_config_validation():
    with pytest.raises(ValueError):
        SpectralConfig(0.0)
    with pytest.raises(ValueError):
        SpectralConfig(0.1, n_r=32)
    with pytest.raises(ValueError):
        SpectralConfig(0.1, eig_tol=0.0)
    with pytest.raises(ValueError):
        SpectralConfig(0.1, m_window=(3, 1))


def test_j0_series_and_zero():
    for x in np.linspace(0, 8, 17):
        assert bessel_j0(x) == pytest.approx(special.j0(x), abs=1e-13)
    assert j0_first_zero() == pytest.approx(special.jn_zeros(0, 1)[0], rel=1e-15)


def test_laplacian_annulus_matches_cross_product_root():
    lam = dirichlet_laplacian_groundstate(0.5, 1.0, 4096)
    assert lam == pytest.approx(bessel_cross_root(0.5), rel=1e-6)


def test_laplacian_disk_and_monotonicity():
    disk = dirichlet_laplacian_groundstate(0.0, 1.0)
    assert disk == pytest.approx(2.404826**2, rel=1e-6)
    assert dirichlet_laplacian_groundstate(0.0, 2.0) == pytest.approx(disk / 4, rel=1e-14)
    assert dirichlet_laplacian_groundstate(0.5, 1.0) > disk


def test_liouville_transform_with_field_switched_off():
    # h = 1, B0 = 0, m = κ = 0: the sector operator is the radial Laplacian
    cfg = SpectralConfig(1.0, 0.0, n_r=4096, B0=0.0)
    assert lambda_m(cfg, 0, 0.5, 1.0) == pytest.approx(bessel_cross_root(0.5), rel=1e-6)
    # m ≠ 0 adds m²/r², the J_m/Y_m problem
    def f(k):
        return special.jv(2, k * 0.5) * special.yv(2, k) - special.jv(2, k) * special.yv(2, k * 0.5)

    k = optimize.brentq(f, 5.0, 7.5, xtol=1e-15)
    assert lambda_m(cfg, 2, 0.5, 1.0) == pytest.approx(k * k, rel=1e-6)


@settings(max_examples=20, deadline=None)
@given(m=st.integers(-15, 15), kappa=st.floats(-0.4, 0.4), h=st.sampled_from([0.1, 0.05, 0.02]))
def test_reindexing_is_exact(m, kappa, h):
    a = lambda_m(SpectralConfig(h, kappa, n_r=256), m)
    b = lambda_m(SpectralConfig(h, kappa + h, n_r=256), m + 1)
    assert a == b


@settings(max_examples=20, deadline=None)
@given(m=st.integers(-10, 10), kappa=st.floats(-0.4, 0.4))
def test_sign_reversal_shifts_by_constant(m, kappa):
    # (r/2 + a/r)² = (r/2 - a/r)² + 2a, so P_{-m}(-κ) = P_m(κ) + 2(hm - κ)
    h = 0.1
    a = lambda_m(SpectralConfig(h, kappa, n_r=256), m)
    b = lambda_m(SpectralConfig(h, -kappa, n_r=256), -m)
    assert b - a == pytest.approx(2 * (h * m - kappa), abs=1e-10 * max(1.0, abs(a), abs(b)))


def test_matrix_depends_on_angular_offset_only():
    d1, o1 = pm_matrix(0.1, [0.3], 0.5, 1.0, 128)
    cfg = SpectralConfig(0.1, 0.2, n_r=128)
    d2, o2 = pm_matrix(0.1, spectral._angular(cfg.h, cfg.kappa, [5]), 0.5, 1.0, 128)
    assert np.array_equal(d1, d2) and np.array_equal(o1, o2)
    with pytest.raises(ValueError):
        pm_matrix(0.1, [0.0], 0.0, 1.0, 128)


def test_figure_two_minimiser():
    res = pauli_groundstate(SpectralConfig(0.1))
    assert 0 <= res.m_star <= 5
    assert res.lambda_min == min(res.lambdas.values())
    assert res.lambda_min > 0


def test_figure_three_window():
    lo, hi = auto_window(0.01, 0.0, 0.5, 1.0)
    assert lo <= 13 and hi >= 50


def test_groundstate_nonnegative_and_ties_to_smallest_m():
    cfg = SpectralConfig(0.05, 0.01)
    res = pauli_groundstate(cfg)
    assert all(v >= -cfg.eig_tol for v in res.lambdas.values())
    ties = [m for m, v in res.lambdas.items() if v == res.lambda_min]
    assert res.m_star == min(ties)


def test_explicit_window_is_used_as_given():
    res = pauli_groundstate(SpectralConfig(0.1, m_window=(0, 2)))
    assert res.window_used == (0, 2) and set(res.lambdas) == {0, 1, 2}


def test_window_failure_after_one_widening(monkeypatch):
    monkeypatch.setattr(spectral, "auto_window", lambda *a, **k: (40, 41))
    with pytest.raises(WindowError, match="after widening"):
        pauli_groundstate(SpectralConfig(0.1))


def test_window_widens_once(monkeypatch):
    monkeypatch.setattr(spectral, "auto_window", lambda *a, **k: (3, 12))
    res = pauli_groundstate(SpectralConfig(0.1))
    assert res.m_star == 3 and res.window_used == (-7, 12)


def test_radial_discretisation_converges():
    a = pauli_groundstate(SpectralConfig(0.1, n_r=2048)).lambda_min
    b = pauli_groundstate(SpectralConfig(0.1, n_r=4096)).lambda_min
    assert abs(a - b) / b < 5e-3


def test_sweep_rows_and_periodic_envelope():
    h = 0.1
    kappas = np.linspace(-1.5 * h, 1.5 * h, 31)
    res = kappa_sweep(SpectralConfig(h, n_r=512), kappas)
    rows = list(res.rows())
    assert len(rows) == kappas.size * res.ms.size
    assert [r[:2] for r in rows[: res.ms.size]] == [(kappas[0], int(m)) for m in res.ms]
    env = res.lambda_min
    # grid step h/10: indices 10 apart are one period apart
    for i in range(kappas.size - 10):
        assert env[i + 10] == pytest.approx(env[i], rel=1e-12)


def test_sweep_independent_of_workers():
    kappas = np.linspace(-0.05, 0.05, 7)
    cfg = SpectralConfig(0.1, n_r=256)
    a = kappa_sweep(cfg, kappas, workers=1)
    b = kappa_sweep(cfg, kappas, workers=3)
    assert np.array_equal(a.table, b.table)
    with pytest.raises(ValueError):
        kappa_sweep(cfg, [])


def test_lambdas_for_matches_single_solves():
    cfg = SpectralConfig(0.05, 0.02, n_r=512)
    batch = lambdas_for(cfg, range(3, 9))
    assert batch.tolist() == [lambda_m(cfg, m) for m in range(3, 9)]


# quasimodes


def test_quasimode_bounds_the_ground_energy():
    h = 0.05
    cc = c_crit(0.5)
    lam = pauli_groundstate(SpectralConfig(h, cc)).lambda_min
    psi = psi_of_C(cc)
    up = quasimode_upper_bound(psi, h, eta=0.05)
    assert up >= lam
    # exponential shape: h log(up) stays below 2(ψ_min + η |∇ψ|_∞) up to a log prefactor
    assert h * math.log(up) <= 2 * (psi.psi_min + 0.05 * psi.grad_max()) + h * math.log(100)


def test_sinh_improves_on_plain_at_small_h():
    psi = psi_of_C(c_crit(0.5))
    h = 0.02
    assert quasimode_upper_bound(psi, h, variant="sinh") <= quasimode_upper_bound(psi, h)


def test_zero_field_reduces_to_cutoff_rayleigh_quotient():
    psi = psi_of_C(0.0, RadialField.constant(0.0), 0.5, 1.0)
    h = 0.05
    lam_d = dirichlet_laplacian_groundstate(0.5, 1.0)
    up = quasimode_upper_bound(psi, h, eta=0.05)
    assert up > h * h * lam_d
    assert quasimode_upper_bound(psi, 2 * h, eta=0.05) == pytest.approx(4 * up, rel=1e-12)


def test_quasimode_preconditions():
    psi = psi_of_C(c_crit(0.5))
    with pytest.raises(HypothesisError, match="inradius"):
        quasimode_upper_bound(psi, 0.05, eta=0.125)
    with pytest.raises(HypothesisError, match="zero traces"):
        quasimode_upper_bound(psi_of_C(-0.3), 0.05, variant="sinh")
    with pytest.raises(ValueError):
        quasimode_upper_bound(psi, 0.05, variant="cosh")
    with pytest.raises(TypeError):
        quasimode_upper_bound(lambda r: r, 0.05)


def test_grid_quasimode_approaches_radial():
    from pauliflux.domain import AnnulusSpec, rasterize_annulus
    from pauliflux.field import harmonic_basis

    basis = harmonic_basis(rasterize_annulus(AnnulusSpec(0.5), 96))
    radial = psi_of_C(c_crit(0.5))
    for variant, eta in (("plain", 0.1), ("sinh", None)):
        g = quasimode_upper_bound(basis.psi0, 0.1, eta=eta, variant=variant)
        r = quasimode_upper_bound(radial, 0.1, eta=eta, variant=variant)
        assert g == pytest.approx(r, rel=0.05)


def test_default_eta_respects_inradius():
    assert spectral.default_eta(0.1, 0.25) < 0.125
    assert spectral.default_eta(0.0004, 0.25) == pytest.approx(0.01)
