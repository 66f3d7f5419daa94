import csv
import subprocess
import sys

import numpy as np
import pytest

from varmesh.cli import main


def run(tmp_path, *args, config=None):
    argv = list(args)
    if config is not None:
        cfg = tmp_path / "cfg.ini"
        cfg.write_text(config)
        argv += ["--config", str(cfg)]
    return main(argv)


def read(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


WELL = """
[mesh1d]
domain = -25, 25
segments = 50
[weight]
type = gaussian_well
depth = 0.9
center = 0
width = 50
"""


def test_mesh1d_outputs(tmp_path, capsys):
    out = tmp_path / "o"
    assert run(tmp_path, "mesh1d", "--out", str(out), config=WELL) == 0
    rows = read(out / "mesh1d.csv")
    assert rows[0] == ["i", "x_i", "h_i"]
    assert len(rows) == 52 and rows[-1][2] == ""
    x = np.array([float(r[1]) for r in rows[1:]])
    h = np.array([float(r[2]) for r in rows[1:-1]])
    assert x[0] == -25.0 and x[-1] == 25.0
    np.testing.assert_allclose(np.diff(x), h, rtol=0, atol=0)
    assert abs(x[np.argmin(h)]) < 1.0
    assert "equidist_residual" in capsys.readouterr().out


def test_manifest_round_trip(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(tmp_path, "mesh1d", "--out", str(a), config=WELL) == 0
    assert main(["mesh1d", "--config", str(a / "manifest.ini"), "--out", str(b)]) == 0
    assert (a / "mesh1d.csv").read_bytes() == (b / "mesh1d.csv").read_bytes()
    assert (a / "manifest.ini").read_text() == (b / "manifest.ini").read_text()


@pytest.mark.parametrize("config,code", [
    ("[mesh1d]\nsegments = many\n", 1),
    ("[mesh1d]\nbogus = 1\n", 1),
    ("[elsewhere]\n", 1),
    ("[weight]\ntype = gaussian_well\ndepth = -0.5\ncenter = 0\nwidth = 1\n", 2),
    ("[weight]\ntype = gaussian_well\ndepth = 1.0\ncenter = 0\nwidth = 1\n", 2),
    ("[weight]\ntype = table\nabscissae = 0, 1\nvalues = 1, -1\n", 2),
    ("[weight]\ntype = table\nabscissae = 0.2, 1\nvalues = 1, 1\n", 2),
])
def test_exit_codes(tmp_path, config, code):
    assert run(tmp_path, "mesh1d", "--out", str(tmp_path / "o"), config=config) == code


def test_missing_config_and_bad_command(tmp_path):
    assert main(["mesh1d", "--config", str(tmp_path / "nope.ini")]) == 1
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 1


def test_mesh2d_harmonic_reports_discrepancy(tmp_path, capsys):
    cfg = """
[mesh2d]
domain_x = -25, 25
domain_y = -25, 25
segments_x = 16
segments_y = 16
solver = harmonic
[weight.x]
type = gaussian_well
depth = 0.9
center = 0
width = 50
[weight.y]
type = gaussian_well
depth = 0.9
center = 0
width = 50
"""
    out = tmp_path / "o"
    assert run(tmp_path, "mesh2d", "--out", str(out), config=cfg) == 0
    text = capsys.readouterr().out
    line = next(s for s in text.splitlines() if s.startswith("max node discrepancy"))
    assert float(line.split(":")[1].split()[0]) < 5e-5
    rows = read(out / "lattice.csv")
    assert rows[0] == ["i", "j", "x", "y"] and len(rows) == 1 + 17 * 17
    # a zero iteration budget cannot converge
    bad = cfg.replace("solver = harmonic", "solver = harmonic\nmax_iter = 0")
    assert run(tmp_path, "mesh2d", "--out", str(out), config=bad) == 3


def test_stencil_stdout(capsys):
    assert main(["stencil", "--h-left", "1", "0.5", "--h-right", "1", "2"]) == 0
    rows = list(csv.reader(capsys.readouterr().out.splitlines()))
    assert rows[0] == ["h_left", "h_right", "order", "a", "b", "c"]
    assert rows[1] == ["1.0", "1.0", "1", "-0.5", "0.0", "0.5"]
    assert rows[2] == ["1.0", "1.0", "2", "1.0", "-2.0", "1.0"]
    assert len(rows) == 5
    assert main(["stencil", "--h-left", "1", "--h-right", "1", "2"]) == 2
    assert main(["stencil", "--h-left", "0", "--h-right", "1"]) == 2


def test_solve_ho_small_deterministic(tmp_path):
    cfg = "[solve-ho]\nnodes_per_axis = 20\nk = 3\n"
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(tmp_path, "solve-ho", "--out", str(a), config=cfg) == 0
    assert run(tmp_path, "solve-ho", "--out", str(b), config=cfg) == 0
    names = sorted(p.relative_to(a) for p in a.rglob("*.csv"))
    assert len(names) == 2 + 6 + 1
    for n in names:
        assert (a / n).read_bytes() == (b / n).read_bytes()
    assert read(a / "spectrum_uniform.csv")[0] == ["index", "energy_MeV", "abs_error_MeV"]
    psi = read(a / "eigenfunctions" / "psi_variable_0.csv")
    assert psi[0] == ["i", "j", "x", "y", "psi"] and len(psi) == 1 + 400
    assert "E0 error ratio" in (a / "comparison.txt").read_text()


def test_console_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "varmesh.cli", "stencil", "--h-left", "2", "--h-right", "2"],
                       capture_output=True, text=True, cwd=tmp_path)
    assert r.returncode == 0 and r.stdout.startswith("h_left")
