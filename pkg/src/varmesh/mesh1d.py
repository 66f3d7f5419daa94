"""One-dimensional equidistributed meshes.

Nodes are placed where the cumulative monitor integral

    S(x) = int_a^x ds / g(s)

takes the equally spaced values ``S_total * i / N``.  ``S`` is tabulated once
on a fine panel grid with adaptive Gauss-Kronrod quadrature; inversion then
brackets each target in a panel and polishes it with safeguarded Newton
steps (``dS/dx = 1/g``).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DomainError, InputError, NumericalError
from .quadrature import integrate_intervals, integrate_panels
from .weights import WeightSpec, check_weight

logger = logging.getLogger(__name__)

__all__ = [
    "CumulativeWeight",
    "Mesh1D",
    "cumulative_s",
    "invert_s",
    "generate_mesh",
    "mesh_from_nodes",
]

QUAD_RTOL = 1e-11
INVERSION_RTOL = 1e-10
PANELS_PER_SEGMENT = 32


def _check_domain(domain):
    try:
        a, b = (float(v) for v in domain)
    except (TypeError, ValueError):
        raise InputError(f"domain must be a pair (a, b), got {domain!r}") from None
    if not (np.isfinite(a) and np.isfinite(b)):
        raise InputError("domain bounds must be finite")
    if not a < b:
        raise InputError(f"empty domain [{a}, {b}]")
    return a, b


class CumulativeWeight:
    """Tabulated ``S(x) = int_a^x 1/g`` with evaluation and inversion.

    Parameters
    ----------
    spec : WeightSpec
        One-dimensional weight, assumed already validated on the domain.
    domain : (float, float)
    n_panels : int
        Number of equal panels of the tabulation grid; weight breakpoints
        (table knots) inside the domain are added on top.
    """

    def __init__(self, spec, domain, n_panels=256, rtol=QUAD_RTOL):
        self.spec = spec
        self.a, self.b = _check_domain(domain)
        self.rtol = rtol
        edges = np.linspace(self.a, self.b, int(n_panels) + 1)
        bp = [p for p in spec.breakpoints() if self.a < p < self.b]
        if bp:
            edges = np.unique(np.concatenate([edges, bp]))
        edges[0], edges[-1] = self.a, self.b
        self.edges = edges
        pieces = integrate_panels(self._integrand, edges, rtol=rtol)
        self.table = np.concatenate([[0.0], np.cumsum(pieces)])
        self.s_total = float(self.table[-1])
        if not (np.isfinite(self.s_total) and self.s_total > 0):
            raise NumericalError("S_total is not a positive finite number", estimate=self.s_total)

    def _integrand(self, x):
        return 1.0 / self.spec._eval(np.clip(x, self.a, self.b))

    def _panel_of(self, x):
        k = np.searchsorted(self.edges, x, side="right") - 1
        return np.clip(k, 0, self.edges.size - 2)

    def _partial(self, k, x):
        # S(x) for x inside panel k
        return self.table[k] + integrate_intervals(
            self._integrand, self.edges[k], x, rtol=self.rtol, atol=1e-15 * self.s_total
        )

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if not np.all(np.isfinite(x)):
            raise InputError("x must be finite")
        if np.any(x < self.a) or np.any(x > self.b):
            raise DomainError(f"x outside [{self.a}, {self.b}]")
        flat = x.ravel()
        k = self._panel_of(flat)
        out = self._partial(k, flat)
        out[flat == self.a] = 0.0
        out[flat == self.b] = self.s_total
        return out.reshape(x.shape) if x.ndim else float(out[0])

    def inverse(self, target, atol=None, max_iter=100):
        """Solve ``S(x) = target`` for each target (vectorised).

        ``atol`` defaults to ``1e-10 * S_total``.  Targets at ``0`` and
        ``S_total`` map exactly to the domain ends.
        """
        tol = INVERSION_RTOL * self.s_total if atol is None else float(atol)
        t = np.asarray(target, dtype=float)
        if not np.all(np.isfinite(t)):
            raise InputError("target must be finite")
        if np.any(t < -tol) or np.any(t > self.s_total + tol):
            raise InputError(f"target outside [0, S_total={self.s_total}]")
        flat = np.clip(t.ravel(), 0.0, self.s_total)
        k = np.searchsorted(self.table, flat, side="right") - 1
        k = np.clip(k, 0, self.edges.size - 2)
        lo, hi = self.edges[k].copy(), self.edges[k + 1].copy()
        s_lo, s_hi = self.table[k], self.table[k + 1]
        frac = np.where(s_hi > s_lo, (flat - s_lo) / np.where(s_hi > s_lo, s_hi - s_lo, 1.0), 0.0)
        x = lo + frac * (hi - lo)
        # Newton polishing; aim well below tol so residual bookkeeping has slack
        goal = 1e-3 * tol
        active = np.ones(flat.size, dtype=bool)
        for _ in range(max_iter):
            idx = np.nonzero(active)[0]
            if idx.size == 0:
                break
            f = self._partial(k[idx], x[idx]) - flat[idx]
            done = np.abs(f) <= goal
            pos = f > 0
            hi[idx[pos]] = np.minimum(hi[idx[pos]], x[idx[pos]])
            lo[idx[~pos]] = np.maximum(lo[idx[~pos]], x[idx[~pos]])
            step = f * self.spec._eval(x[idx])
            trial = x[idx] - step
            outside = (trial <= lo[idx]) | (trial >= hi[idx])
            trial = np.where(outside, 0.5 * (lo[idx] + hi[idx]), trial)
            stalled = np.abs(trial - x[idx]) <= 4 * np.finfo(float).eps * np.maximum(1.0, np.abs(x[idx]))
            x[idx[~done]] = trial[~done]
            active[idx[done | stalled]] = False
        else:
            f = self._partial(k, x) - flat
            if np.max(np.abs(f)) > tol:
                raise NumericalError("inversion of S did not converge", estimate=x.reshape(t.shape))
        x[flat == 0.0] = self.a
        x[flat == self.s_total] = self.b
        return x.reshape(t.shape) if t.ndim else float(x[0])


def cumulative_s(spec: WeightSpec, domain, x, n_panels: int = 256):
    """``S(x) = int_a^x ds / g(s)`` by adaptive quadrature."""
    check_weight(spec, domain)
    return CumulativeWeight(spec, domain, n_panels)(x)


def invert_s(spec: WeightSpec, domain, target, n_panels: int = 256):
    """Return ``x`` with ``S(x) = target`` to within ``1e-10 * S_total``."""
    check_weight(spec, domain)
    return CumulativeWeight(spec, domain, n_panels).inverse(target)


@dataclass(frozen=True, eq=False)
class Mesh1D:
    """Strictly increasing nodes ``x_0 = a < ... < x_N = b``.

    ``s_total`` and ``equidist_residual`` are ``nan`` for meshes not built by
    equidistribution (see :func:`mesh_from_nodes`).
    """

    domain: tuple
    nodes: np.ndarray
    s_total: float = float("nan")
    equidist_residual: float = float("nan")
    tolerance: float = float("nan")
    spacings: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float)
        nodes.setflags(write=False)
        h = np.diff(nodes)
        h.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "spacings", h)

    @property
    def n_segments(self):
        return self.nodes.size - 1

    def __len__(self):
        return self.nodes.size

    def cell_weights(self):
        """Trapezoid weights ``(h_{i-1} + h_i) / 2`` at the interior nodes."""
        h = self.spacings
        return 0.5 * (h[:-1] + h[1:])

    def interior(self):
        return self.nodes[1:-1]


def mesh_from_nodes(nodes, domain=None) -> Mesh1D:
    """Wrap an explicit node array (must be strictly increasing, >= 2 nodes)."""
    nodes = np.asarray(nodes, dtype=float)
    if nodes.ndim != 1 or nodes.size < 2:
        raise InputError("need a 1-d array of at least 2 nodes")
    if not np.all(np.isfinite(nodes)) or np.any(np.diff(nodes) <= 0):
        raise InputError("nodes must be finite and strictly increasing")
    if domain is None:
        domain = (float(nodes[0]), float(nodes[-1]))
    elif (nodes[0], nodes[-1]) != tuple(domain):
        raise InputError("first/last node must equal the domain bounds")
    return Mesh1D(domain=tuple(float(v) for v in domain), nodes=nodes)


def generate_mesh(spec: WeightSpec, domain, n_segments: int, panels_per_segment: int = PANELS_PER_SEGMENT) -> Mesh1D:
    """Equidistribute ``n_segments`` cells of ``1/g`` over ``domain``.

    Returns ``n_segments + 1`` nodes ``x_i = S^{-1}(S_total * i / N)`` with the
    ends pinned exactly to ``a`` and ``b``.
    """
    if isinstance(n_segments, bool) or int(n_segments) != n_segments or n_segments < 2:
        raise InputError(f"N must be an integer >= 2, got {n_segments!r}")
    n = int(n_segments)
    a, b = _check_domain(domain)
    if spec.ndim != 1:
        raise InputError("generate_mesh needs a 1-d weight")
    check_weight(spec, (a, b))
    cw = CumulativeWeight(spec, (a, b), n_panels=panels_per_segment * n)
    targets = cw.s_total * np.arange(n + 1) / n
    nodes = cw.inverse(targets)
    nodes[0], nodes[-1] = a, b
    if np.any(np.diff(nodes) <= 0):
        raise NumericalError("generated nodes are not strictly increasing", estimate=nodes)
    s_nodes = cw(nodes)
    residual = float(np.max(np.abs(np.diff(s_nodes) - cw.s_total / n)))
    tol = INVERSION_RTOL * cw.s_total
    logger.debug("mesh N=%d S_total=%.12g residual=%.3g", n, cw.s_total, residual)
    return Mesh1D(domain=(a, b), nodes=nodes, s_total=cw.s_total, equidist_residual=residual, tolerance=tol)
