import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pauliflux.errors import DomainError
from pauliflux.radial import (
    Branch,
    RadialField,
    RadialFluxModel,
    c_crit,
    c_from_flux,
    c_from_trace,
    flux_from_c,
    oscillation_branches,
    psi_of_C,
    read_field_table,
    trace_from_c,
)

rhos = st.floats(0.05, 0.95)
cs = st.floats(-2.0, 1.0)


def scan_osc(C, rho, R=1.0, B0=1.0, n=20001):
    r = np.linspace(rho, R, n)
    psi = B0 * (r * r - R * R) / 4 + C * np.log(r / R)
    return psi.min(), psi.max()


def test_c_crit_value():
    # both traces vanish: B0 (rho² - R²)/4 + C log(rho/R) = 0
    assert c_crit(0.5) == pytest.approx(0.75 / (4 * math.log(0.5)), rel=1e-15)
    assert c_crit(0.5) == pytest.approx(-0.270501, abs=5e-6)
    psi = psi_of_C(c_crit(0.5))
    assert abs(psi.trace) < 1e-15
    assert psi.branch is Branch.INTERIOR_MIN
    assert psi.osc == pytest.approx(0.031659, abs=1e-6)


def test_figure_one_branches():
    rho = 0.5
    assert psi_of_C(-0.5, rho=rho).branch is Branch.NO_INTERIOR_MIN_LOW_C
    assert psi_of_C(-rho * rho / 2, rho=rho).branch is Branch.NO_INTERIOR_MIN_HIGH_C
    assert psi_of_C(c_crit(rho), rho=rho).branch is Branch.INTERIOR_MIN


@settings(max_examples=300, deadline=None)
@given(C=cs, rho=rhos)
def test_branch_formulas_match_scan(C, rho):
    lo, hi = scan_osc(C, rho)
    # a 2e4-point scan resolves a quadratic extremum to ~1e-9
    assert oscillation_branches(C, rho) == pytest.approx(hi - lo, abs=1e-8)
    psi = psi_of_C(C, rho=rho)
    assert psi.psi_min == pytest.approx(lo, abs=1e-8)
    assert psi.psi_max == pytest.approx(hi, abs=1e-8)
    assert psi.psi_min <= psi(psi.argmin_r) + 1e-14


@settings(max_examples=200, deadline=None)
@given(C=cs, rho=rhos, B0=st.floats(0.2, 5.0), R=st.floats(1.0, 3.0))
def test_general_constant_field_against_scan(C, rho, B0, R):
    rho = rho * R
    lo, hi = scan_osc(C, rho, R, B0)
    psi = psi_of_C(C, RadialField.constant(B0), rho, R)
    assert psi.osc == pytest.approx(hi - lo, abs=1e-8 * max(1.0, B0 * R * R))


@given(rho=rhos, eps=st.floats(1e-9, 1e-3))
def test_oscillation_continuous_across_branch_edges(rho, eps):
    for edge in (-0.5, -rho * rho / 2):
        a = oscillation_branches(edge - eps, rho)
        b = oscillation_branches(edge + eps, rho)
        assert abs(a - b) < 20 * eps


@settings(max_examples=200)
@given(C=cs, rho=rhos)
def test_c_crit_minimises_oscillation(C, rho):
    assert oscillation_branches(C, rho) >= oscillation_branches(c_crit(rho), rho) - 1e-15


@given(C=cs, rho=rhos, B0=st.floats(0.1, 4.0))
def test_conversion_round_trips(C, rho, B0):
    assert c_from_trace(trace_from_c(C, rho, 1.0, B0), rho, 1.0, B0) == pytest.approx(C, abs=1e-12)
    assert c_from_flux(flux_from_c(C, rho, B0), rho, B0) == pytest.approx(C, abs=1e-12)


def test_flux_of_c_crit():
    # 2π C_crit + π rho²
    assert flux_from_c(c_crit(0.5), 0.5) == pytest.approx(-0.914237, abs=1e-6)
    model = RadialFluxModel(0.5)
    assert model.phi0[0] == pytest.approx(flux_from_c(c_crit(0.5), 0.5))
    assert model.oscillation_at(model.phi0) == pytest.approx(model.osc0, abs=1e-15)


def test_disk_model_has_no_lattice():
    model = RadialFluxModel(0.0)
    assert model.k == 0 and model.phi0.size == 0
    assert model.osc0 == pytest.approx(0.25)
    with pytest.raises(DomainError):
        psi_of_C(-0.1, rho=0.0)


def test_constant_table_reproduces_closed_form():
    r = np.linspace(0.4, 1.0, 7)
    table = RadialField.table(r, np.full(r.size, 1.0))
    for C in (-0.6, c_crit(0.5), -0.1):
        a = psi_of_C(C, table, 0.5, 1.0)
        b = psi_of_C(C, None, 0.5, 1.0)
        assert a.branch is b.branch
        assert a.psi_min == pytest.approx(b.psi_min, abs=1e-7)
        assert a.psi_max == pytest.approx(b.psi_max, abs=1e-7)
        rr = np.linspace(0.5, 1.0, 11)
        assert np.allclose(a(rr), b(rr), atol=1e-7)


def test_table_model_critical_c():
    r = np.linspace(0.5, 1.0, 51)
    table = RadialField.table(r, 1.0 + r)
    model = RadialFluxModel(0.5, 1.0, table)
    assert abs(model.psi0.trace) < 1e-12
    assert model.psi0.branch is Branch.INTERIOR_MIN


def test_table_must_cover_annulus():
    table = RadialField.table([0.6, 1.0], [1.0, 1.0])
    with pytest.raises(ValueError, match="cover"):
        psi_of_C(-0.2, table, 0.5, 1.0)


def test_read_field_table(tmp_path):
    good = tmp_path / "b.csv"
    good.write_text("r,B\n0.5,1\n0.75,1.5\n1.0,2\n")
    f = read_field_table(good)
    assert f(0.625) == pytest.approx(1.25)
    bad = tmp_path / "bad.csv"
    bad.write_text("r,B\n0.5,1\n0.4,1\n")
    with pytest.raises(ValueError, match="bad.csv:3:"):
        read_field_table(bad)
    bad.write_text("x,y\n")
    with pytest.raises(ValueError, match="bad.csv:1:"):
        read_field_table(bad)


@given(C=cs, rho=rhos)
def test_derivative_matches_finite_difference(C, rho):
    psi = psi_of_C(C, rho=rho)
    r = 0.5 * (rho + 1.0)
    step = 1e-6
    fd = (psi(r + step) - psi(r - step)) / (2 * step)
    assert psi.derivative(r) == pytest.approx(fd, abs=1e-6)


@given(rho=rhos, t=st.floats(0.01, 0.99))
def test_interior_minimum_is_critical(rho, t):
    C = -0.5 + t * (0.5 - rho * rho / 2)
    psi = psi_of_C(C, rho=rho)
    assert psi.branch is Branch.INTERIOR_MIN
    assert rho < psi.argmin_r < 1.0
    assert abs(psi.derivative(psi.argmin_r)) < 1e-12


@given(p=st.floats(-1, 1), rho=st.floats(0.05, 0.95))
def test_flux_from_trace_composition(p, rho):
    # composing the two elementary maps leaves rho^2/2, not rho^2, in the constant
    lr = math.log(rho)
    expected = p / lr + rho * rho / 2 + (1 - rho * rho) / (4 * lr)
    got = flux_from_c(c_from_trace(p, rho), rho) / (2 * math.pi)
    assert got == pytest.approx(expected, rel=1e-12, abs=1e-12)
