"""CSV writers for meshes, lattices, spectra and eigenfunctions.

Floats are written with ``repr`` (shortest round-trip form) so reruns are
byte-identical and values reload exactly.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

__all__ = [
    "fmt",
    "write_mesh1d_csv",
    "write_tensor_lattice_csv",
    "write_mapped_lattice_csv",
    "write_spectrum_csv",
    "write_eigenfunction_csv",
    "write_comparison_csv",
    "write_stencil_csv",
]


def fmt(v) -> str:
    return repr(float(v))


def _writer(path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fh = path.open("w", newline="")
    return path, fh, csv.writer(fh, lineterminator="\n")


def write_mesh1d_csv(mesh, path) -> Path:
    """Columns ``i, x_i, h_i``; ``h_N`` is empty."""
    path, fh, w = _writer(path)
    with fh:
        w.writerow(["i", "x_i", "h_i"])
        h = mesh.spacings
        for i, x in enumerate(mesh.nodes):
            w.writerow([i, fmt(x), fmt(h[i]) if i < h.size else ""])
    return path


def write_tensor_lattice_csv(mesh, path) -> Path:
    """Columns ``i, j, x_i, y_j`` for every node of a 2-d tensor mesh (i fastest)."""
    path, fh, w = _writer(path)
    xs, ys = mesh.axes[0].nodes, mesh.axes[1].nodes
    with fh:
        w.writerow(["i", "j", "x_i", "y_j"])
        for j, y in enumerate(ys):
            for i, x in enumerate(xs):
                w.writerow([i, j, fmt(x), fmt(y)])
    return path


def write_mapped_lattice_csv(grid, path) -> Path:
    """Columns ``i, j, x, y`` for a harmonic-map grid (i fastest)."""
    path, fh, w = _writer(path)
    with fh:
        w.writerow(["i", "j", "x", "y"])
        for j in range(grid.ny):
            for i in range(grid.nx):
                w.writerow([i, j, fmt(grid.x[i, j]), fmt(grid.y[i, j])])
    return path


def write_spectrum_csv(solution, path) -> Path:
    """Columns ``index, energy_MeV, abs_error_MeV``."""
    path, fh, w = _writer(path)
    with fh:
        w.writerow(["index", "energy_MeV", "abs_error_MeV"])
        for n, (e, err) in enumerate(zip(solution.energies, solution.abs_errors)):
            w.writerow([n, fmt(e), fmt(err)])
    return path


def write_eigenfunction_csv(solution, n, path) -> Path:
    """Columns ``i, j, x, y, psi`` over all nodes; boundary nodes carry ``psi = 0``."""
    path, fh, w = _writer(path)
    xs, ys = (m.nodes for m in solution.mesh.axes)
    full = np.zeros((xs.size, ys.size))
    full[1:-1, 1:-1] = solution.psi[n]
    with fh:
        w.writerow(["i", "j", "x", "y", "psi"])
        for j, y in enumerate(ys):
            for i, x in enumerate(xs):
                w.writerow([i, j, fmt(x), fmt(y), fmt(full[i, j])])
    return path


def write_comparison_csv(report, path) -> Path:
    path, fh, w = _writer(path)
    with fh:
        w.writerow(["index", "exact_MeV", "uniform_MeV", "uniform_abs_error_MeV",
                    "variable_MeV", "variable_abs_error_MeV"])
        for row in report.rows():
            w.writerow([row[0]] + [fmt(v) for v in row[1:]])
    return path


def write_stencil_csv(rows, stream):
    """``rows`` of ``(h_left, h_right, order, a, b, c)`` to an open text stream."""
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(["h_left", "h_right", "order", "a", "b", "c"])
    for hl, hr, order, a, b, c in rows:
        w.writerow([fmt(hl), fmt(hr), order, fmt(a), fmt(b), fmt(c)])
