import json

import pytest

from pauliflux import cli
from pauliflux.domain import write_mask
from pauliflux.errors import WindowError

from conftest import two_hole_mask


@pytest.fixture
def mask_file(tmp_path):
    path = tmp_path / "twohole.msk"
    write_mask(path, two_hole_mask(48), origin=(-1.0, -1.0), spacing=2.0 / 48)
    return path


def run(tmp_path, *argv):
    return cli.main([*argv, "--out", str(tmp_path / "o")])


def test_potential_crit_summary(tmp_path, capsys):
    assert run(tmp_path, "potential", "--annulus", "0.5", "1", "--B", "1", "--C", "crit") == 0
    out = capsys.readouterr().out
    assert "osc=0.03165942" in out
    doc = json.loads((tmp_path / "o_potential.json").read_text())
    assert doc["entries"][0]["osc"] == pytest.approx(0.031659, abs=1e-6)
    fig = (tmp_path / "o_fig1.csv").read_text().splitlines()
    assert fig[0] == "r,psi_C_minus_half,psi_C_crit,psi_C_minus_rho2_half"
    assert len(fig) == 1 + cli.SAMPLES


def test_potential_figure_styles(tmp_path):
    svg = tmp_path / "fig1.svg"
    argv = ["potential", "--annulus", "0.5", "1", "--B", "1", "--C", "-0.5", "--C", "crit", "--C", "-0.125"]
    assert run(tmp_path, *argv, "--svg", str(svg)) == 0
    text = svg.read_text()
    assert text.count("<polyline") == 3
    lines = [line for line in text.splitlines() if line.startswith("<polyline")]
    assert 'stroke-dasharray="8,5"' in lines[0]
    assert "stroke-dasharray" not in lines[1]
    assert 'stroke-dasharray="1.5,4"' in lines[2]


def test_potential_on_mask(tmp_path, mask_file):
    assert run(tmp_path, "potential", "--mask", str(mask_file), "--B", "1", "--traces", "0,0") == 0
    rows = (tmp_path / "o_grid_psi.csv").read_text().splitlines()
    assert rows[0] == "x,y,psi"
    doc = json.loads((tmp_path / "o_potential.json").read_text())
    assert doc["k"] == 2 and doc["osc"] == doc["osc0"]


def test_potential_grid_annulus(tmp_path, capsys):
    assert run(tmp_path, "potential", "--annulus", "0.5", "1", "--grid-n", "48") == 0
    assert "grid n=48" in capsys.readouterr().out
    assert (tmp_path / "o_grid_psi.csv").exists()


def test_potential_traces_and_flux_agree(tmp_path):
    assert run(tmp_path, "potential", "--annulus", "0.5", "1", "--traces", "0") == 0
    a = json.loads((tmp_path / "o_potential.json").read_text())["entries"][0]
    assert run(tmp_path, "potential", "--annulus", "0.5", "1", "--flux", repr(a["flux"])) == 0
    b = json.loads((tmp_path / "o_potential.json").read_text())["entries"][0]
    assert a["C"] == pytest.approx(b["C"], abs=1e-15)


def test_sweep_row_count(tmp_path, capsys):
    argv = ["sweep", "--h", "0.1", "--kappa-range", "-0.15", "0.15", "--points", "61", "--n-r", "256"]
    assert run(tmp_path, *argv, "--svg", str(tmp_path / "s.svg")) == 0
    rows = (tmp_path / "o_sweep.csv").read_text().splitlines()
    env = (tmp_path / "o_envelope.csv").read_text().splitlines()
    assert rows[0] == "kappa,m,lambda" and env[0] == "kappa,lambda_min,m_star"
    assert len(env) == 62
    ms = {line.split(",")[1] for line in rows[1:]}
    assert len(rows) - 1 == 61 * len(ms)
    # envelope at κ and κ + h: 20 grid steps apart
    lam = [float(line.split(",")[1]) for line in env[1:]]
    for i in range(41):
        assert lam[i + 20] == pytest.approx(lam[i], rel=1e-12)
    assert "<polyline" in (tmp_path / "s.svg").read_text()


def test_sweep_multiple_h_files(tmp_path):
    assert run(tmp_path, "sweep", "--h", "0.1,0.05", "--points", "5", "--n-r", "128") == 0
    assert (tmp_path / "o_h0.1_sweep.csv").exists()
    assert (tmp_path / "o_h0.05_envelope.csv").exists()


def test_bounds_annulus(tmp_path):
    assert run(tmp_path, "bounds", "--annulus", "0.5", "1", "--B", "1", "--h", "0.1", "--kappa", "0") == 0
    doc = json.loads((tmp_path / "o_bounds.json").read_text())
    assert list(doc) == list(
        "h flux osc_used lower_basic lower_gauge lower_ekp_annulus upper_quasimode "
        "lambda_numeric two_inf_psi0 delta lambda_dirichlet flags".split()
    )
    checks = {k: v for k, v in doc["flags"].items() if isinstance(v, str)}
    assert set(checks.values()) == {"PASS"}


def test_bounds_mask(tmp_path, mask_file):
    argv = ["bounds", "--mask", str(mask_file), "--B", "1", "--flux", "0.3,0.7", "--h", "0.05"]
    assert run(tmp_path, *argv) == 0
    doc = json.loads((tmp_path / "o_bounds.json").read_text())
    assert doc["delta"] >= 0
    assert len(doc["flux"]) == 2


def test_slope_command(tmp_path):
    assert run(tmp_path, "slope", "--h", "0.04,0.02", "--n-r", "512") == 0
    doc = json.loads((tmp_path / "o_slope.json").read_text())
    assert doc["h_pairs"] == [[0.04, 0.02]]
    assert doc["target"] == pytest.approx(-0.063318, abs=2e-6)


def test_laplacian_command(tmp_path, capsys, mask_file):
    assert run(tmp_path, "laplacian", "--annulus", "0", "1") == 0
    assert "5.78318596" in capsys.readouterr().out
    assert run(tmp_path, "laplacian", "--mask", str(mask_file)) == 0


@pytest.mark.parametrize(
    "argv",
    [
        ["sweep"],
        ["sweep", "--h", "0.1", "--mask", "nowhere.msk"],
        ["potential", "--annulus", "0.7", "0.5"],
        ["bounds", "--h", "-1"],
        ["sweep", "--h", "0.1", "--m-window", "3"],
        ["potential", "--annulus", "0.5", "1", "--B-grid", "x.csv"],
        ["potential", "--annulus", "0", "1", "--kappa", "0.1"],
    ],
)
def test_configuration_errors_exit_2(tmp_path, argv, capsys):
    assert run(tmp_path, *argv) == cli.EXIT_CONFIG
    assert "configuration error" in capsys.readouterr().err


def test_bad_mask_reports_line(tmp_path, capsys):
    bad = tmp_path / "bad.msk"
    bad.write_text("3 2 0 0 1\nIII\nIQI\n")
    assert run(tmp_path, "laplacian", "--mask", str(bad)) == cli.EXIT_CONFIG
    assert "bad.msk:3:" in capsys.readouterr().err


def test_argparse_errors_exit_2(tmp_path):
    with pytest.raises(SystemExit) as exc:
        run(tmp_path, "potential", "--C", "nonsense")
    assert exc.value.code == 2


def test_numerical_failure_exit_3(tmp_path, monkeypatch, capsys):
    def boom(*a, **k):
        raise WindowError("minimum at window edge")

    monkeypatch.setattr(cli, "pauli_groundstate", boom)
    assert run(tmp_path, "slope", "--h", "0.04,0.02") == cli.EXIT_NUMERICAL
    assert "numerical failure" in capsys.readouterr().err
