"""Weight (monitor) functions controlling local mesh density.

A weight ``g`` is small where the mesh should be fine and large where it may
be coarse.  Only its shape matters: any positive rescaling produces the same
mesh, so the only hard requirements are positivity and finiteness.

All weights are immutable and evaluate vectorised over numpy arrays::

    >>> g = GaussianWell(depth=0.9, center=0.0, width=50.0)
    >>> float(g(0.0))
    0.1
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .exceptions import DomainError, InputError, WeightValidationError

__all__ = [
    "WeightSpec",
    "Constant",
    "GaussianWell",
    "Table",
    "Product",
    "FunctionWeight",
    "ValidationReport",
    "evaluate",
    "validate",
    "check_weight",
    "restrict",
    "weight_from_config",
]


def _as_finite(x, name="x"):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{name} must be finite")
    return arr


class WeightSpec:
    """Base class of all weights.

    Subclasses implement ``_eval`` on finite float arrays; ``__call__`` adds
    input checking.  ``ndim`` is the number of coordinates taken.
    """

    ndim = 1

    def __call__(self, *coords):
        if len(coords) != self.ndim:
            raise InputError(f"{type(self).__name__} takes {self.ndim} coordinate(s), got {len(coords)}")
        arrs = [_as_finite(c, f"coordinate {k}") for k, c in enumerate(coords)]
        out = self._eval(*arrs)
        return out if out.ndim else out[()]

    def _eval(self, *coords):
        raise NotImplementedError

    def hull(self):
        """Interval on which the weight is defined (per axis), ``None`` if unbounded."""
        return None

    def critical_points(self):
        """Abscissae worth sampling explicitly when hunting for extrema."""
        return ()

    def breakpoints(self):
        """Points where the weight is not smooth (quadrature splits there)."""
        return ()

    def to_config(self):
        raise NotImplementedError


@dataclass(frozen=True)
class Constant(WeightSpec):
    """``g(x) = level``; yields a uniform mesh for any positive level."""

    level: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.level) and self.level > 0):
            raise WeightValidationError(f"Constant level must be positive and finite, got {self.level}")

    def _eval(self, x):
        return np.full_like(x, float(self.level))

    def to_config(self):
        return {"type": "constant", "level": self.level}


@dataclass(frozen=True)
class GaussianWell(WeightSpec):
    """``g(x) = 1 - depth * exp(-((x - center) / width)**2)``.

    Minimum ``1 - depth`` at ``center``; ``depth`` must lie in ``[0, 1)``.
    """

    depth: float = 0.9
    center: float = 0.0
    width: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.depth) and 0.0 <= self.depth < 1.0):
            raise WeightValidationError(f"GaussianWell depth must lie in [0, 1), got {self.depth}")
        if not math.isfinite(self.center):
            raise WeightValidationError("GaussianWell center must be finite")
        if not (math.isfinite(self.width) and self.width > 0):
            raise WeightValidationError(f"GaussianWell width must be positive, got {self.width}")

    def _eval(self, x):
        u = (x - self.center) / self.width
        return 1.0 - self.depth * np.exp(-u * u)

    def critical_points(self):
        return (self.center,)

    def to_config(self):
        return {"type": "gaussian_well", "depth": self.depth, "center": self.center, "width": self.width}


@dataclass(frozen=True)
class Table(WeightSpec):
    """Piecewise-linear interpolation of sampled values.

    Evaluation outside ``[abscissae[0], abscissae[-1]]`` raises
    :class:`DomainError`; there is no extrapolation.  Sign of the values is
    not checked here, :func:`validate` reports it.
    """

    abscissae: tuple
    values: tuple
    interpolation: str = "linear"

    def __post_init__(self):
        xs = np.asarray(self.abscissae, dtype=float)
        vs = np.asarray(self.values, dtype=float)
        if xs.ndim != 1 or xs.shape != vs.shape or xs.size < 2:
            raise InputError("Table needs matching 1-d abscissae/values with at least 2 entries")
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(vs))):
            raise InputError("Table entries must be finite")
        if np.any(np.diff(xs) <= 0):
            raise InputError("Table abscissae must be strictly ascending")
        if self.interpolation != "linear":
            raise InputError(f"unsupported interpolation {self.interpolation!r}")
        object.__setattr__(self, "abscissae", tuple(float(v) for v in xs))
        object.__setattr__(self, "values", tuple(float(v) for v in vs))
        object.__setattr__(self, "_xs", xs)
        object.__setattr__(self, "_vs", vs)

    def _eval(self, x):
        if np.any(x < self._xs[0]) or np.any(x > self._xs[-1]):
            raise DomainError(f"Table evaluated outside [{self._xs[0]}, {self._xs[-1]}]")
        return np.interp(x, self._xs, self._vs)

    def hull(self):
        return (self.abscissae[0], self.abscissae[-1])

    def critical_points(self):
        return self.abscissae

    def breakpoints(self):
        return self.abscissae

    def to_config(self):
        return {"type": "table", "abscissae": list(self.abscissae), "values": list(self.values)}


@dataclass(frozen=True)
class Product(WeightSpec):
    """Separable weight ``g(x, y, ...) = g_0(x) * g_1(y) * ...``."""

    factors: tuple

    def __post_init__(self):
        factors = tuple(self.factors)
        if not factors:
            raise InputError("Product needs at least one factor")
        for f in factors:
            if not isinstance(f, WeightSpec) or f.ndim != 1:
                raise InputError("Product factors must be 1-d weights")
        object.__setattr__(self, "factors", factors)

    @property
    def ndim(self):
        return len(self.factors)

    def _eval(self, *coords):
        out = np.ones(np.broadcast_shapes(*(c.shape for c in coords)))
        for f, c in zip(self.factors, coords):
            out = out * f._eval(c)
        return out

    def hull(self):
        return tuple(f.hull() for f in self.factors)

    def to_config(self):
        return {"type": "product", "factors": [f.to_config() for f in self.factors]}


@dataclass(frozen=True, eq=False)
class FunctionWeight(WeightSpec):
    """Wrap a vectorised Python callable.  Programmatic use only.

    The callable must accept ``ndim`` arrays and return an array of the
    broadcast shape.  It is trusted to be pure.
    """

    func: Callable = field(repr=False)
    dims: int = 1

    @property
    def ndim(self):
        return self.dims

    def _eval(self, *coords):
        return np.asarray(self.func(*coords), dtype=float) * np.ones(
            np.broadcast_shapes(*(c.shape for c in coords))
        )

    def to_config(self):
        raise InputError("FunctionWeight has no config representation")


@dataclass(frozen=True)
class _Restricted(WeightSpec):
    parent: WeightSpec
    axis: int
    fixed: tuple

    def _eval(self, x):
        coords = list(self.fixed)
        coords.insert(self.axis, x)
        coords = [np.broadcast_to(np.asarray(c, dtype=float), x.shape) for c in coords]
        return self.parent._eval(*coords)

    def critical_points(self):
        if isinstance(self.parent, Product):
            return self.parent.factors[self.axis].critical_points()
        return ()

    def breakpoints(self):
        if isinstance(self.parent, Product):
            return self.parent.factors[self.axis].breakpoints()
        return ()


def restrict(spec: WeightSpec, axis: int, fixed: Sequence[float]) -> WeightSpec:
    """1-d slice of an n-d weight along ``axis`` with other coordinates ``fixed``."""
    if spec.ndim == 1:
        return spec
    if len(fixed) != spec.ndim - 1:
        raise InputError("need one fixed value per remaining axis")
    return _Restricted(spec, int(axis), tuple(float(v) for v in fixed))


def evaluate(spec: WeightSpec, *coords):
    """Evaluate ``spec`` at a point, enforcing strict positivity of the result."""
    value = spec(*coords)
    if np.any(~(np.asarray(value) > 0)) or not np.all(np.isfinite(value)):
        raise WeightValidationError(f"weight is not strictly positive at {coords}")
    return value


@dataclass(frozen=True)
class ValidationReport:
    minimum: float
    maximum: float
    argmin: tuple
    argmax: tuple
    positive: bool
    bounded: bool
    samples: int

    @property
    def valid(self):
        return self.positive and self.bounded

    def message(self):
        if self.valid:
            return f"valid: g in [{self.minimum:.6g}, {self.maximum:.6g}]"
        problems = []
        if not self.positive:
            problems.append(f"positivity violated (min {self.minimum:.6g} at {self.argmin})")
        if not self.bounded:
            problems.append("non-finite values")
        return "invalid: " + "; ".join(problems)


def _normalise_domain(spec, domain):
    dom = np.asarray(domain, dtype=float)
    if dom.ndim == 1:
        dom = dom[None, :]
    if dom.shape != (spec.ndim, 2):
        raise InputError(f"domain must have shape ({spec.ndim}, 2), got {dom.shape}")
    if not np.all(np.isfinite(dom)):
        raise InputError("domain bounds must be finite")
    if np.any(dom[:, 0] >= dom[:, 1]):
        raise InputError(f"empty domain {domain}")
    return dom


def _axis_samples(spec, axis, lo, hi, samples):
    xs = list(np.linspace(lo, hi, samples))
    extra = spec.critical_points() if spec.ndim == 1 else (
        spec.factors[axis].critical_points() if isinstance(spec, Product) else ()
    )
    xs.extend(c for c in extra if lo <= c <= hi)
    return np.unique(np.asarray(xs, dtype=float))


def validate(spec: WeightSpec, domain, samples: int = 1000) -> ValidationReport:
    """Sample ``spec`` densely over ``domain`` and report min/max and validity.

    ``domain`` is ``(a, b)`` for 1-d weights or one interval per axis.
    Known critical points (well centres, table knots) are always sampled.
    """
    if int(samples) < 2:
        raise InputError("samples must be >= 2")
    dom = _normalise_domain(spec, domain)
    axes = [_axis_samples(spec, d, dom[d, 0], dom[d, 1], int(samples)) for d in range(spec.ndim)]
    grids = np.meshgrid(*axes, indexing="ij")
    with np.errstate(all="ignore"):
        vals = np.asarray(spec(*grids), dtype=float)
    finite = np.isfinite(vals)
    bounded = bool(np.all(finite))
    safe = np.where(finite, vals, np.nan)
    imin = np.unravel_index(np.nanargmin(safe), safe.shape)
    imax = np.unravel_index(np.nanargmax(safe), safe.shape)
    vmin, vmax = float(safe[imin]), float(safe[imax])
    return ValidationReport(
        minimum=vmin,
        maximum=vmax,
        argmin=tuple(float(axes[d][imin[d]]) for d in range(spec.ndim)),
        argmax=tuple(float(axes[d][imax[d]]) for d in range(spec.ndim)),
        positive=bool(vmin > 0),
        bounded=bounded,
        samples=int(vals.size),
    )


def check_weight(spec: WeightSpec, domain, samples: int = 1000) -> ValidationReport:
    """Like :func:`validate` but raise :class:`WeightValidationError` on failure."""
    if not isinstance(spec, WeightSpec):
        raise InputError(f"expected a WeightSpec, got {type(spec).__name__}")
    dom = _normalise_domain(spec, domain)
    hull = spec.hull()
    if hull is not None:
        hulls = [hull] if spec.ndim == 1 else list(hull)
        for d, h in enumerate(hulls):
            if h is not None and (dom[d, 0] < h[0] or dom[d, 1] > h[1]):
                raise DomainError(f"domain axis {d} {tuple(dom[d])} exceeds weight hull {h}")
    report = validate(spec, dom, samples)
    if not report.valid:
        raise WeightValidationError(report.message(), report)
    return report


def weight_from_config(cfg: dict) -> WeightSpec:
    """Build a weight from its mapping form, e.g.
    ``{"type": "gaussian_well", "depth": 0.9, "center": 0.0, "width": 50.0}``.
    """
    cfg = dict(cfg)
    kind = cfg.pop("type", None)
    try:
        if kind == "constant":
            spec = Constant(float(cfg.pop("level", 1.0)))
        elif kind == "gaussian_well":
            spec = GaussianWell(
                depth=float(cfg.pop("depth")),
                center=float(cfg.pop("center", 0.0)),
                width=float(cfg.pop("width")),
            )
        elif kind == "table":
            spec = Table(tuple(cfg.pop("abscissae")), tuple(cfg.pop("values")))
        elif kind == "product":
            spec = Product(tuple(weight_from_config(f) for f in cfg.pop("factors")))
        else:
            raise InputError(f"unknown weight type {kind!r}")
    except KeyError as exc:
        raise InputError(f"weight {kind!r} missing key {exc.args[0]!r}") from None
    if cfg:
        raise InputError(f"unknown weight keys for {kind!r}: {sorted(cfg)}")
    return spec
