import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pslab import GridSpec, OutOfDomainError, ScalarField, SolutionPair
from pslab.grid import gradient_fields, interpolate, laplacian


def test_gridspec_basic():
    g = GridSpec((-1.0, -1.0), (1.0, 1.0), (21, 21))
    assert g.dim == 2
    assert g.h == pytest.approx(0.1)
    assert g.shape == (21, 21)
    assert g.size == 441
    assert np.allclose(g.axis(0), np.linspace(-1, 1, 21))
    x, y = g.meshes()
    assert x.shape == (21, 21)
    assert x[3, 0] == pytest.approx(g.axis(0)[3])


def test_gridspec_validation():
    with pytest.raises(ValueError, match="anisotropic"):
        GridSpec((-1.0, -1.0), (1.0, 2.0), (21, 21))
    with pytest.raises(ValueError, match="at least 3 nodes"):
        GridSpec((0.0,), (1.0,), (2,))
    with pytest.raises(ValueError, match="exceed"):
        GridSpec((1.0,), (0.0,), (11,))
    with pytest.raises(ValueError, match="dim"):
        GridSpec((0.0,) * 4, (1.0,) * 4, (5,) * 4)
    with pytest.raises(ValueError, match="equal length"):
        GridSpec((0.0, 0.0), (1.0,), (5,))


def test_max_radius_and_contains():
    g = GridSpec((-1.0, -1.0), (1.0, 1.0), (21, 21))
    assert g.max_radius((0.0, 0.0)) == pytest.approx(1.0 - g.h)
    assert g.max_radius((0.5, 0.0)) == pytest.approx(0.5 - g.h)
    assert g.contains([(0.0, 0.0), (1.5, 0.0)]).tolist() == [True, False]


def test_scalar_field_validation():
    g = GridSpec((0.0,), (1.0,), (11,))
    with pytest.raises(ValueError, match="finite"):
        ScalarField(g, np.full(11, np.nan))
    f = ScalarField.zeros(g)
    with pytest.raises(ValueError):
        f.values[0] = 1.0  # read-only


def test_solution_pair_validation():
    g = GridSpec((0.0,), (1.0,), (11,))
    f = ScalarField.zeros(g)
    g2 = GridSpec((0.0,), (2.0,), (11,))
    with pytest.raises(ValueError, match="share one grid"):
        SolutionPair(f, ScalarField.zeros(g2))
    with pytest.raises(ValueError, match="nonnegative"):
        SolutionPair(f, ScalarField(g, np.full(11, -1.0)))
    with pytest.raises(ValueError, match="beta"):
        SolutionPair(f, f, beta=-1.0)
    SolutionPair(f, f, beta=0.0)  # decoupled limit allowed
    neg = ScalarField(g, np.full(11, -1.0))
    SolutionPair(neg, neg, check_positivity=False)


@settings(max_examples=20, deadline=None)
@given(st.tuples(*[st.floats(-2, 2) for _ in range(6)]))
def test_laplacian_exact_on_quadratics(coef):
    a, b, c, d, e, f0 = coef
    g = GridSpec((-1.0, -1.0), (1.0, 1.0), (17, 17))
    x, y = g.meshes()
    fld = ScalarField(g, a * x * x + b * y * y + c * x * y + d * x + e * y + f0)
    lap = laplacian(fld).values
    core = (slice(1, -1), slice(1, -1))
    assert np.allclose(lap[core], 2 * a + 2 * b, atol=1e-10)
    assert np.all(lap[0] == 0) and np.all(lap[-1] == 0)


@settings(max_examples=20, deadline=None)
@given(st.tuples(*[st.floats(-2, 2) for _ in range(4)]),
       st.tuples(st.floats(-0.99, 0.99), st.floats(-0.99, 0.99)))
def test_interpolate_exact_on_multilinear(coef, pt):
    a, b, c, d = coef
    g = GridSpec((-1.0, -1.0), (1.0, 1.0), (13, 13))
    x, y = g.meshes()
    f = ScalarField(g, a + b * x + c * y + d * x * y)
    px, py = pt
    expect = a + b * px + c * py + d * px * py
    assert interpolate(f, (px, py)) == pytest.approx(expect, abs=1e-12)


def test_interpolate_out_of_domain():
    g = GridSpec((0.0, 0.0), (1.0, 1.0), (5, 5))
    f = ScalarField.zeros(g)
    with pytest.raises(OutOfDomainError):
        interpolate(f, (1.2, 0.5))


def test_gradient_fourth_order_exact_on_cubics():
    g = GridSpec((-1.0, -1.0), (1.0, 1.0), (33, 33))
    x, y = g.meshes()
    f = ScalarField(g, x ** 3 + 2 * y ** 3 - x * y)
    gx, gy = gradient_fields(f, order=4)
    core = (slice(2, -2), slice(2, -2))
    assert np.allclose(gx.values[core], (3 * x * x - y)[core], atol=1e-12)
    assert np.allclose(gy.values[core], (6 * y * y - x)[core], atol=1e-12)
