import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import vandermonde_weights
from varmesh.exceptions import InputError
from varmesh.mesh1d import generate_mesh, mesh_from_nodes
from varmesh.stencil import differentiate, first_derivative_coeffs, second_derivative_coeffs
from varmesh.weights import Table

spacing = st.floats(1e-3, 1e3)


def test_uniform_first_derivative():
    h = 0.37
    c = first_derivative_coeffs(h, h)
    assert (c.a, c.b, c.c) == (-1 / (2 * h), 0.0, 1 / (2 * h))


def test_uniform_second_derivative():
    h = 0.37
    c = second_derivative_coeffs(h, h)
    assert (c.a, c.b, c.c) == (1 / (h * h), -2 / (h * h), 1 / (h * h))


def test_first_derivative_1_2():
    c = first_derivative_coeffs(1.0, 2.0)
    np.testing.assert_allclose([c.a, c.b, c.c], [-2 / 3, 1 / 2, 1 / 6], rtol=1e-15)
    np.testing.assert_allclose([c.a, c.b, c.c], vandermonde_weights([-1, 0, 2], 1), rtol=1e-13)


def test_second_derivative_1_2():
    c = second_derivative_coeffs(1.0, 2.0)
    np.testing.assert_allclose([c.a, c.b, c.c], [2 / 3, -1.0, 1 / 3], rtol=1e-15)
    np.testing.assert_allclose([c.a, c.b, c.c], vandermonde_weights([-1, 0, 2], 2), rtol=1e-13)


def test_quadratic_exactness_example():
    c = second_derivative_coeffs(1.0, 2.0)
    assert c.a * 1 + c.b * 0 + c.c * 4 == pytest.approx(2.0, rel=1e-15)


def test_textbook_forms_agree():
    # ratio forms vs the unfactored expressions
    hl, hr = 0.3, 1.7
    c = first_derivative_coeffs(hl, hr)
    assert c.a == pytest.approx(-hr / (hl * (hr + hl)), rel=1e-15)
    assert c.b == pytest.approx((hr**2 - hl**2) / (hr * hl * (hr + hl)), rel=1e-15)
    assert c.c == pytest.approx(hl / (hr * (hr + hl)), rel=1e-15)


@pytest.mark.parametrize("bad", [(0.0, 1.0), (1.0, -2.0), (float("inf"), 1.0)])
def test_nonpositive_spacing_rejected(bad):
    with pytest.raises(InputError):
        first_derivative_coeffs(*bad)
    with pytest.raises(InputError):
        second_derivative_coeffs(*bad)


@settings(max_examples=200, deadline=None)
@given(hl=spacing, hr=spacing)
def test_stencils_match_vandermonde(hl, hr):
    for order, fn in ((1, first_derivative_coeffs), (2, second_derivative_coeffs)):
        c = fn(hl, hr)
        ref = vandermonde_weights([-hl, 0.0, hr], order)
        np.testing.assert_allclose([c.a, c.b, c.c], ref, rtol=1e-8, atol=1e-9 * np.abs(ref).max())
        assert abs(c.a + c.b + c.c) <= 1e-12 * max(abs(c.a), abs(c.b), abs(c.c))


def test_differentiate_linear():
    m = mesh_from_nodes([0.0, 0.1, 0.5, 0.6, 1.4, 2.0])
    d = differentiate(m, 3 * m.nodes + 1, order=1)
    np.testing.assert_allclose(d, 3.0, rtol=1e-12)


def test_differentiate_quadratic():
    x = np.array([0.0, 0.3, 1.0])
    assert differentiate(x, x**2, order=2) == pytest.approx([2.0], rel=1e-13)


def test_differentiate_length_mismatch():
    with pytest.raises(InputError):
        differentiate(np.array([0.0, 1.0, 2.0]), np.zeros(4))


def test_differentiate_second_order_convergence():
    xs = tuple(np.linspace(1.0, np.e, 64))
    g = Table(xs, xs)
    errs = []
    for n in (64, 128):
        m = generate_mesh(g, (1.0, np.e), n)
        d = differentiate(m, np.sin(m.nodes), order=2)
        errs.append(np.max(np.abs(d + np.sin(m.interior()))))
    assert errs[0] / errs[1] >= 3.5


def test_differentiate_first_order_convergence():
    xs = tuple(np.linspace(1.0, np.e, 64))
    g = Table(xs, xs)
    errs = []
    for n in (64, 128):
        m = generate_mesh(g, (1.0, np.e), n)
        d = differentiate(m, np.sin(m.nodes), order=1)
        errs.append(np.max(np.abs(d - np.cos(m.interior()))))
    assert errs[0] / errs[1] >= 3.5
