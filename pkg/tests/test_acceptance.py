"""Acceptance criteria, one test each.

Every test prints a single ``[PASS]``/``[FAIL]`` line (visible with ``-s`` or in
the ``-v`` log) carrying the measured quantity, its bound and the runtime.
"""

import time

import numpy as np
import pytest
import scipy.sparse as sp

from conftest import quad_s
from varmesh import GaussianWell, Product
from varmesh.cli import main
from varmesh.harmonic_map import solve_winslow
from varmesh.mesh1d import generate_mesh
from varmesh.schrodinger import HOProblem, compare_meshes
from varmesh.spectral import dense_lowest, lowest_eigenpairs
from varmesh.stencil import first_derivative_coeffs, second_derivative_coeffs
from varmesh.tensor_mesh import generate_tensor_mesh
from varmesh.weights import FunctionWeight

pytestmark = pytest.mark.acceptance

WELL = GaussianWell(0.9, 0.0, 50.0)
BOX = (-25.0, 25.0)

# E0 tolerance on the default variable mesh: twice the recorded error 0.0749 MeV
E0_TOL_MEV = 0.15


def report(capsys, tag, ok, detail, elapsed, limit):
    ok = ok and elapsed < limit
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] {tag}: {detail}; {elapsed:.2f} s (limit {limit} s)")
    assert ok


def test_ac1_stencil_exactness(capsys):
    t0 = time.perf_counter()
    rng = np.random.default_rng(1)
    hl = 10.0 ** rng.uniform(-3, 3, 1000)
    hr = 10.0 ** rng.uniform(-3, 3, 1000)
    worst = 0.0
    for fn, order in ((first_derivative_coeffs, 1), (second_derivative_coeffs, 2)):
        a, b, c, _ = fn(hl, hr)
        for p in range(3):
            vals = [(-hl) ** p, np.full_like(hl, 0.0 ** p), hr**p]
            terms = np.stack([a * vals[0], b * vals[1], c * vals[2]])
            exact = {0: 0.0, 1: 1.0 if order == 1 else 0.0, 2: 0.0 if order == 1 else 2.0}[p]
            scale = np.maximum(np.abs(terms).sum(axis=0), 1.0 if exact else 0.0) + np.abs(exact)
            worst = max(worst, float(np.max(np.abs(terms.sum(axis=0) - exact) / scale)))
    report(capsys, "AC1 stencil exactness", worst <= 1e-12,
           f"max relative defect {worst:.2e} <= 1e-12", time.perf_counter() - t0, 1)


def test_ac2_uniform_reduction(capsys):
    t0 = time.perf_counter()
    hs = np.random.default_rng(2).uniform(1e-3, 1e3, 10000)
    d1 = first_derivative_coeffs(hs, hs)
    d2 = second_derivative_coeffs(hs, hs)
    ok = (np.array_equal(d1.a, -1 / (2 * hs)) and np.array_equal(d1.b, np.zeros_like(hs))
          and np.array_equal(d1.c, 1 / (2 * hs)) and np.array_equal(d2.a, 1 / hs**2)
          and np.array_equal(d2.b, -2 / hs**2) and np.array_equal(d2.c, 1 / hs**2))
    report(capsys, "AC2 uniform reduction", ok, "bit-identical on 10000 spacings",
           time.perf_counter() - t0, 1)


def test_ac3_equidistribution(capsys):
    t0 = time.perf_counter()
    s_total = quad_s(WELL, *BOX)
    worst = 0.0
    for n in (50, 200):
        m = generate_mesh(WELL, BOX, n)
        inc = np.array([quad_s(WELL, a, b) for a, b in zip(m.nodes[:-1], m.nodes[1:])])
        worst = max(worst, float(np.max(np.abs(inc - s_total / n))) / s_total)
    report(capsys, "AC3 equidistribution", worst <= 1e-8,
           f"max |dS - S/N| / S = {worst:.2e} <= 1e-8 (N = 50, 200)", time.perf_counter() - t0, 5)


def test_ac4_exponential_mesh(capsys):
    t0 = time.perf_counter()
    m = generate_mesh(FunctionWeight(lambda s: s), (1.0, np.e), 16)
    err = float(np.max(np.abs(m.nodes - np.exp(np.arange(17) / 16))))
    report(capsys, "AC4 analytic mesh", err <= 1e-9, f"max |x_i - exp(i/N)| = {err:.2e} <= 1e-9",
           time.perf_counter() - t0, 1)


def test_ac5_harmonic_vs_tensor(capsys):
    t0 = time.perf_counter()
    grid = solve_winslow(Product((WELL, WELL)), (BOX, BOX), 33, 33, tol=1e-8)
    X, Y = generate_tensor_mesh([WELL, WELL], [BOX, BOX], [32, 32]).lattice()
    disc = max(np.max(np.abs(grid.x - X)), np.max(np.abs(grid.y - Y)))
    jac = grid.min_jacobian()
    ok = disc <= 1e-6 * 50 and grid.residual <= 1e-8 and jac > 0
    report(capsys, "AC5 harmonic vs tensor", ok,
           f"discrepancy {disc:.2e} fm <= 5e-5, residual {grid.residual:.2e} <= 1e-8, min jacobian {jac:.3g} > 0",
           time.perf_counter() - t0, 60)


def test_ac6_laplacian_and_lanczos(capsys):
    t0 = time.perf_counter()
    n, h = 99, 1 / 100
    L = sp.diags([-np.ones(n - 1), 2 * np.ones(n), -np.ones(n - 1)], [-1, 0, 1], format="csr") / h**2
    got = lowest_eigenpairs(L, 5, method="lanczos").values
    want = 2 * (1 - np.cos(np.arange(1, 6) * np.pi / 100)) / h**2
    rel_lap = float(np.max(np.abs(got - want) / want))
    rel_rand = 0.0
    for seed in range(3):
        M = np.random.default_rng(seed).standard_normal((300, 300))
        M = M + M.T
        lz = lowest_eigenpairs(M, 6, method="lanczos", seed=seed).values
        de = dense_lowest(M, 6).values
        rel_rand = max(rel_rand, float(np.max(np.abs(lz - de) / np.abs(de))))
    ok = rel_lap <= 1e-9 and rel_rand <= 1e-9
    report(capsys, "AC6 spectrum oracle", ok,
           f"laplacian rel {rel_lap:.2e}, lanczos vs dense rel {rel_rand:.2e} (both <= 1e-9)",
           time.perf_counter() - t0, 30)


@pytest.fixture(scope="module")
def comparison():
    t0 = time.perf_counter()
    rep = compare_meshes(HOProblem(), k=6, method="lanczos")
    return rep, time.perf_counter() - t0


def test_ac7_ho_spectrum(capsys, comparison):
    rep, elapsed = comparison
    E = rep.variable.energies
    groups = [E[0:1], E[1:3], E[3:6]]
    spread = max(float(g.max() - g.min()) for g in groups)
    centres_ok = all(abs(g.mean() - c) <= 0.05 * c for g, c in zip(groups, (10, 20, 30)))
    separated = E[0] < E[1] - 5 and E[2] < E[3] - 5
    e0 = abs(E[0] - 10.0)
    ok = e0 <= E0_TOL_MEV and centres_ok and separated and spread <= 0.2 * 10
    report(capsys, "AC7 HO spectrum", ok,
           f"E = {np.array2string(E, precision=4)}, |E0 - 10| = {e0:.4f} <= {E0_TOL_MEV}, "
           f"max multiplet width {spread:.3f} MeV", elapsed, 120)


def test_ac8_mesh_improvement(capsys, comparison):
    rep, elapsed = comparison
    eu, ev = rep.uniform.abs_errors[0], rep.variable.abs_errors[0]
    ok = rep.uniform.dimension == rep.variable.dimension and ev < eu
    report(capsys, "AC8 mesh improvement", ok,
           f"dim {rep.dimension}: |dE0| uniform {eu:.4f} vs variable {ev:.4f}, ratio {rep.e0_error_ratio:.3f}",
           elapsed, 240)


def test_ac9_determinism(capsys, tmp_path):
    t0 = time.perf_counter()
    cfg = tmp_path / "ho.ini"
    cfg.write_text("[solve-ho]\nmesh = both\n[run]\nseed = 7\n")
    runs = []
    for tag in ("a", "b"):
        assert main(["solve-ho", "--config", str(cfg), "--out", str(tmp_path / tag)]) == 0
        runs.append(tmp_path / tag)
    files = sorted(p.relative_to(runs[0]) for p in runs[0].rglob("*.csv"))
    same = bool(files) and all((runs[0] / f).read_bytes() == (runs[1] / f).read_bytes() for f in files)
    same = same and sorted(p.relative_to(runs[1]) for p in runs[1].rglob("*.csv")) == files
    report(capsys, "AC9 determinism", same, f"{len(files)} CSV files byte-identical across two runs",
           time.perf_counter() - t0, 240)
