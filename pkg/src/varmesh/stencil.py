"""Three-point finite-difference coefficients on uneven spacing.

For neighbours at distances ``h_left = x_i - x_{i-1}`` and
``h_right = x_{i+1} - x_i`` the derivative at ``x_i`` is approximated as
``a*f[i-1] + b*f[i] + c*f[i+1]``.

The first-derivative weights are evaluated in ratio form, which is
algebraically equal to the textbook expressions but reduces *bit for bit* to
``(-1/(2h), 0, 1/(2h))`` when the spacings coincide.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .exceptions import InputError

__all__ = ["StencilCoeffs", "first_derivative_coeffs", "second_derivative_coeffs", "differentiate"]


class StencilCoeffs(NamedTuple):
    a: float
    b: float
    c: float
    order: int


def _check_spacing(h_left, h_right):
    hl = np.asarray(h_left, dtype=float)
    hr = np.asarray(h_right, dtype=float)
    if not (np.all(np.isfinite(hl)) and np.all(np.isfinite(hr))):
        raise InputError("spacings must be finite")
    if np.any(hl <= 0) or np.any(hr <= 0):
        raise InputError("spacings must be positive")
    return hl, hr


def _scalar(v):
    return float(v) if np.ndim(v) == 0 else v


def first_derivative_coeffs(h_left, h_right) -> StencilCoeffs:
    """Weights of ``f'(x_i)``; exact for quadratics.  Accepts arrays."""
    hl, hr = _check_spacing(h_left, h_right)
    # a = -hr / (hl (hl + hr)), c = hl / (hr (hl + hr)), b = (hr^2 - hl^2) / (hl hr (hl + hr))
    a = -1.0 / (hl * (1.0 + hl / hr))
    c = 1.0 / (hr * (1.0 + hr / hl))
    b = (hr - hl) / (hr * hl)
    return StencilCoeffs(_scalar(a), _scalar(b), _scalar(c), 1)


def second_derivative_coeffs(h_left, h_right) -> StencilCoeffs:
    """Weights of ``f''(x_i)``; exact for quadratics.  Accepts arrays."""
    hl, hr = _check_spacing(h_left, h_right)
    s = hl + hr
    a = 2.0 / (hl * s)
    b = -2.0 / (hl * hr)
    c = 2.0 / (hr * s)
    return StencilCoeffs(_scalar(a), _scalar(b), _scalar(c), 2)


def differentiate(x, f, order=1):
    """Derivative of samples ``f`` on nodes ``x`` at the interior nodes.

    ``x`` may be a :class:`~varmesh.mesh1d.Mesh1D` or a node array.  Returns an
    array of length ``len(x) - 2``; boundary nodes are not included.
    """
    nodes = getattr(x, "nodes", x)
    nodes = np.asarray(nodes, dtype=float)
    f = np.asarray(f, dtype=float)
    if nodes.ndim != 1 or nodes.size < 3:
        raise InputError("need at least 3 nodes (2 segments)")
    if f.shape[0] != nodes.size:
        raise InputError(f"sample/mesh length mismatch: {f.shape[0]} vs {nodes.size}")
    h = np.diff(nodes)
    if order == 1:
        a, b, c, _ = first_derivative_coeffs(h[:-1], h[1:])
    elif order == 2:
        a, b, c, _ = second_derivative_coeffs(h[:-1], h[1:])
    else:
        raise InputError(f"order must be 1 or 2, got {order!r}")
    a, b, c = (np.atleast_1d(v) for v in (a, b, c))
    shape = (-1,) + (1,) * (f.ndim - 1)
    return a.reshape(shape) * f[:-2] + b.reshape(shape) * f[1:-1] + c.reshape(shape) * f[2:]
