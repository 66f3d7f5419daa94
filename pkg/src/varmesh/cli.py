"""Command-line front end.

Usage::

    varmesh mesh1d   --config run.ini --out results/
    varmesh mesh2d   --config run.ini --out results/
    varmesh stencil  --h-left 1 --h-right 2
    varmesh solve-ho --config run.ini --out results/ --seed 0

Configs are INI files: one section named after the command plus weight
sections (``[weight]`` for 1-d, ``[weight.x]`` / ``[weight.y]`` for 2-d).
Unknown sections or keys are rejected.  Every run writes ``manifest.ini``
to the output directory; it is itself a valid config reproducing the run.

Exit codes: 0 success, 1 usage/config error, 2 validation error,
3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import configparser
import logging
import sys
from pathlib import Path

import numpy as np

from . import io
from .io import fmt
from .exceptions import ConvergenceError, DomainError, InputError, MeshValidityError, NumericalError
from .harmonic_map import solve_winslow
from .mesh1d import generate_mesh
from .schrodinger import HOProblem, compare_meshes, solve_ho
from .stencil import first_derivative_coeffs, second_derivative_coeffs
from .tensor_mesh import generate_tensor_mesh
from .weights import Product, check_weight, weight_from_config

logger = logging.getLogger("varmesh")

EXIT_OK, EXIT_CONFIG, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 1, 2, 3


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------- config

def _pair(text):
    vals = _floats(text)
    if len(vals) != 2:
        raise ValueError(f"expected two numbers, got {text!r}")
    return tuple(vals)


def _floats(text):
    return [float(v) for v in text.replace(",", " ").split()]


def _choice(*options):
    def parse(text):
        text = text.strip()
        if text not in options:
            raise ValueError(f"expected one of {options}, got {text!r}")
        return text
    parse.options = options
    return parse


WEIGHT_KEYS = {
    "type": str,
    "level": float,
    "depth": float,
    "center": float,
    "width": float,
    "abscissae": _floats,
    "values": _floats,
}

SCHEMAS = {
    "mesh1d": {
        "domain": (_pair, (0.0, 1.0)),
        "segments": (int, 50),
    },
    "mesh2d": {
        "domain_x": (_pair, (0.0, 1.0)),
        "domain_y": (_pair, (0.0, 1.0)),
        "segments_x": (int, 32),
        "segments_y": (int, 32),
        "solver": (_choice("tensor", "harmonic"), "tensor"),
        "tol": (float, 1e-8),
        "max_iter": (int, 200),
    },
    "stencil": {
        "h_left": (_floats, [1.0]),
        "h_right": (_floats, [1.0]),
    },
    "solve-ho": {
        "domain": (_pair, (-25.0, 25.0)),
        "nodes_per_axis": (int, 50),
        "counting": (_choice("nodes", "segments"), "nodes"),
        "hbar_omega": (float, 10.0),
        "weight_depth": (float, 0.9),
        "mesh": (_choice("uniform", "variable", "harmonic-map", "both"), "both"),
        "k": (int, 6),
        "tol": (float, 1e-9),
        "method": (_choice("auto", "lanczos", "dense"), "auto"),
    },
}

WEIGHT_SECTIONS = {"mesh1d": ("weight",), "mesh2d": ("weight.x", "weight.y")}
DEFAULT_WEIGHT = {"type": "constant", "level": 1.0}


def _format_value(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return ", ".join(_format_value(x) for x in v)
    return str(v)


def load_config(command, path=None):
    """Parse and type-check the config for ``command``.

    Returns ``(settings, weights, seed)`` with every default filled in.
    """
    parser = configparser.ConfigParser(interpolation=None, default_section="__none__")
    parser.optionxform = str
    if path is not None:
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"config file not found: {path}")
        try:
            parser.read(path)
        except configparser.Error as exc:
            raise ConfigError(f"cannot parse {path}: {exc}") from None
    allowed = {command, "run", *WEIGHT_SECTIONS.get(command, ())}
    unknown = set(parser.sections()) - allowed
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}")

    schema = SCHEMAS[command]
    settings = {}
    raw = dict(parser[command]) if parser.has_section(command) else {}
    bad = set(raw) - set(schema)
    if bad:
        raise ConfigError(f"unknown keys in [{command}]: {sorted(bad)}")
    for key, (conv, default) in schema.items():
        if key in raw:
            try:
                settings[key] = conv(raw[key])
            except ValueError as exc:
                raise ConfigError(f"[{command}] {key}: {exc}") from None
        else:
            settings[key] = default

    weights = {}
    for section in WEIGHT_SECTIONS.get(command, ()):
        if not parser.has_section(section):
            weights[section] = dict(DEFAULT_WEIGHT)
            continue
        entry = {}
        for key, text in parser[section].items():
            if key not in WEIGHT_KEYS:
                raise ConfigError(f"unknown keys in [{section}]: {key!r}")
            try:
                entry[key] = WEIGHT_KEYS[key](text)
            except ValueError as exc:
                raise ConfigError(f"[{section}] {key}: {exc}") from None
        if "type" not in entry:
            raise ConfigError(f"[{section}] needs a 'type'")
        weights[section] = entry

    seed = 0
    if parser.has_section("run"):
        extra = set(parser["run"]) - {"command", "seed"}
        if extra:
            raise ConfigError(f"unknown keys in [run]: {sorted(extra)}")
        run_cmd = parser["run"].get("command")
        if run_cmd is not None and run_cmd != command:
            raise ConfigError(f"config was written for {run_cmd!r}, not {command!r}")
        try:
            seed = int(parser["run"].get("seed", "0"))
        except ValueError as exc:
            raise ConfigError(f"[run] seed: {exc}") from None
    return settings, weights, seed


def write_manifest(out, command, settings, weights, seed):
    cp = configparser.ConfigParser(interpolation=None, default_section="__none__")
    cp.optionxform = str
    cp["run"] = {"command": command, "seed": str(seed)}
    cp[command] = {k: _format_value(v) for k, v in settings.items()}
    for section, entry in weights.items():
        cp[section] = {k: _format_value(v) for k, v in entry.items()}
    path = Path(out) / "manifest.ini"
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w") as fh:
        cp.write(fh)
    return path


# ---------------------------------------------------------------- commands

def cmd_mesh1d(settings, weights, seed, out):
    spec = weight_from_config(weights["weight"])
    report = check_weight(spec, settings["domain"])
    mesh = generate_mesh(spec, settings["domain"], settings["segments"])
    path = io.write_mesh1d_csv(mesh, out / "mesh1d.csv")
    h = mesh.spacings
    print(f"nodes: {len(mesh.nodes)}  S_total: {fmt(mesh.s_total)}")
    print(f"g range: [{fmt(report.minimum)}, {fmt(report.maximum)}]")
    print(f"min h: {fmt(h.min())} at x={fmt(mesh.nodes[np.argmin(h)])}  max h: {fmt(h.max())}")
    print(f"equidist_residual: {fmt(mesh.equidist_residual)} (tolerance {fmt(mesh.tolerance)})")
    print(f"wrote {path}")


def cmd_mesh2d(settings, weights, seed, out):
    gx = weight_from_config(weights["weight.x"])
    gy = weight_from_config(weights["weight.y"])
    domains = [settings["domain_x"], settings["domain_y"]]
    Ns = [settings["segments_x"], settings["segments_y"]]
    tensor = generate_tensor_mesh([gx, gy], domains, Ns)
    if settings["solver"] == "tensor":
        path = io.write_tensor_lattice_csv(tensor, out / "lattice.csv")
        print(f"tensor lattice {tensor.dims[0]} x {tensor.dims[1]}")
        print(f"wrote {path}")
        return
    try:
        grid = solve_winslow(Product((gx, gy)), domains, Ns[0] + 1, Ns[1] + 1,
                             tol=settings["tol"], max_iter=settings["max_iter"])
    except ConvergenceError as exc:
        print(f"harmonic map did not converge: last residual {fmt(exc.residual)}", file=sys.stderr)
        raise
    path = io.write_mapped_lattice_csv(grid, out / "lattice.csv")
    X, Y = tensor.lattice()
    disc = max(np.max(np.abs(grid.x - X)), np.max(np.abs(grid.y - Y)))
    size = max(b - a for a, b in domains)
    print(f"harmonic map {grid.nx} x {grid.ny}: iterations {grid.iterations}, residual {fmt(grid.residual)}")
    print(f"min cell Jacobian: {fmt(grid.min_jacobian())}")
    print(f"max node discrepancy vs tensor mesh: {fmt(disc)} ({fmt(disc / size)} of domain size)")
    print(f"wrote {path}")


def cmd_stencil(settings, weights, seed, out, stream=None):
    hl, hr = settings["h_left"], settings["h_right"]
    if len(hl) != len(hr):
        raise InputError("h_left and h_right need the same number of entries")
    rows = []
    for a, b in zip(hl, hr):
        for order, fn in ((1, first_derivative_coeffs), (2, second_derivative_coeffs)):
            c = fn(a, b)
            rows.append((a, b, order, c.a, c.b, c.c))
    io.write_stencil_csv(rows, stream or sys.stdout)
    if out is not None:
        with (out / "stencil.csv").open("w", newline="") as fh:
            io.write_stencil_csv(rows, fh)


def _ho_outputs(sol, out, tag):
    io.write_spectrum_csv(sol, out / f"spectrum_{tag}.csv")
    for n in range(len(sol.energies)):
        io.write_eigenfunction_csv(sol, n, out / "eigenfunctions" / f"psi_{tag}_{n}.csv")
    print(f"[{tag}] dimension {sol.dimension}, method {sol.eigen.method}")
    for n, (e, ex, err) in enumerate(zip(sol.energies, sol.exact, sol.abs_errors)):
        print(f"  E{n} = {fmt(e)} MeV  (exact {fmt(ex)}, |error| {fmt(err)})")


def cmd_solve_ho(settings, weights, seed, out):
    mesh = settings["mesh"]
    problem = HOProblem(
        domain=settings["domain"],
        nodes_per_axis=settings["nodes_per_axis"],
        counting=settings["counting"],
        hbar_omega=settings["hbar_omega"],
        weight_depth=settings["weight_depth"],
        mesh_kind="variable" if mesh == "both" else mesh,
    )
    kw = dict(tol=settings["tol"], method=settings["method"], seed=seed)
    if mesh != "both":
        sol = solve_ho(problem, settings["k"], **kw)
        _ho_outputs(sol, out, mesh)
        return
    report = compare_meshes(problem, settings["k"], **kw)
    _ho_outputs(report.uniform, out, "uniform")
    _ho_outputs(report.variable, out, "variable")
    io.write_comparison_csv(report, out / "comparison.csv")
    stats = report.spacing_stats()
    lines = [
        f"hamiltonian dimension: {report.dimension} (both meshes)",
        f"uniform spacing: {fmt(stats['uniform'][0])}",
        f"variable spacing: min {fmt(stats['variable'][0])} max {fmt(stats['variable'][1])}",
        f"E0 abs error uniform: {fmt(report.uniform.abs_errors[0])}",
        f"E0 abs error variable: {fmt(report.variable.abs_errors[0])}",
        f"E0 error ratio uniform/variable: {fmt(report.e0_error_ratio)}",
    ]
    (out / "comparison.txt").write_text("\n".join(lines) + "\n")
    print("\n".join(lines))


COMMANDS = {
    "mesh1d": cmd_mesh1d,
    "mesh2d": cmd_mesh2d,
    "stencil": cmd_stencil,
    "solve-ho": cmd_solve_ho,
}


def build_parser():
    parser = _Parser(prog="varmesh", description="Equidistributed finite-difference meshes and eigenproblems.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path, help="INI config file")
        p.add_argument("--out", type=Path, help="output directory (default: ./out)")
        p.add_argument("--seed", type=int, help="start-vector seed (overrides [run] seed)")
        if name == "stencil":
            p.add_argument("--h-left", type=float, nargs="+")
            p.add_argument("--h-right", type=float, nargs="+")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    command = args.command
    try:
        settings, weights, seed = load_config(command, args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.seed is not None:
        seed = args.seed
    if command == "stencil":
        if args.h_left is not None:
            settings["h_left"] = args.h_left
        if args.h_right is not None:
            settings["h_right"] = args.h_right
    out = None
    if command != "stencil" or args.out is not None:
        out = (args.out or Path("out")).resolve()
        out.mkdir(parents=True, exist_ok=True)
    try:
        COMMANDS[command](settings, weights, seed, out)
    except (ConvergenceError, NumericalError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (InputError, DomainError, MeshValidityError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    if out is not None:
        write_manifest(out, command, settings, weights, seed)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
