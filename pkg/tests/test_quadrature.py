import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pslab import GridSpec, ScalarField, SolutionPair
from pslab.quadrature import PairSampler, SphereQuadrature, expr_mass, \
    expr_one, pairwise_dot, surface_measure, xn_second_moment


@pytest.mark.parametrize("dim", [1, 2, 3])
def test_weights_sum_to_surface_measure(dim):
    q = SphereQuadrature.build(dim)
    assert q.weights.sum() == pytest.approx(surface_measure(dim), rel=1e-12)
    assert np.allclose(np.linalg.norm(q.nodes, axis=1), 1.0)


@pytest.mark.parametrize("dim", [1, 2, 3])
def test_second_moment_matches_closed_form(dim):
    q = SphereQuadrature.build(dim)
    moment = float((q.weights * q.nodes[:, -1] ** 2).sum())
    assert moment == pytest.approx(xn_second_moment(dim), abs=1e-12)


def test_quartic_moment_2d():
    # int_{S^1} x^4 = 3 pi / 4; the trapezoid rule is exact for it
    q = SphereQuadrature.build(2)
    m4 = float((q.weights * q.nodes[:, 0] ** 4).sum())
    assert m4 == pytest.approx(3 * math.pi / 4, rel=1e-12)


def _linear_sampler(n=129):
    g = GridSpec((-1.0, -1.0), (1.0, 1.0), (n, n))
    xn = g.meshes()[-1]
    pair = SolutionPair(ScalarField(g, np.maximum(xn, 0.0)),
                        ScalarField(g, np.maximum(-xn, 0.0)))
    return PairSampler(pair), SphereQuadrature.build(2)


def test_sphere_integral_of_one():
    s, q = _linear_sampler()
    r = 0.5
    assert s.sphere_integral(expr_one, (0.0, 0.0), r, q) == \
        pytest.approx(2 * math.pi * r, rel=1e-12)


def test_ball_integral_of_one():
    s, q = _linear_sampler()
    r = 0.5
    assert s.ball_integral(expr_one, (0.0, 0.0), r, q) == \
        pytest.approx(math.pi * r * r, rel=1e-6)


def test_shell_ball_equals_ball_in_2d():
    # the shell kernel |y - x0|^{2-N} is identically 1 in 2D
    s, q = _linear_sampler()
    r = 0.4
    a = s.shell_ball_integral(expr_mass, (0.0, 0.0), r, q)
    b = s.ball_integral(expr_mass, (0.0, 0.0), r, q)
    assert a == pytest.approx(b, rel=1e-12)


def test_sphere_mass_of_linear_pair():
    # int_{dB_r} (u^2 + v^2) = int_{dB_r} x_N^2 = pi r^3 in 2D
    s, q = _linear_sampler()
    for r in (0.3, 0.6, 0.9):
        val = s.sphere_integral(expr_mass, (0.0, 0.0), r, q)
        assert val == pytest.approx(math.pi * r ** 3, rel=1e-6)


def test_sphere_radius_guard():
    s, q = _linear_sampler()
    from pslab import OutOfDomainError
    with pytest.raises(OutOfDomainError):
        s.sphere_integral(expr_one, (0.5, 0.5), 0.6, q)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=200))
def test_pairwise_dot_matches_fsum(xs):
    w = np.asarray(xs)
    v = np.ones_like(w)
    expect = math.fsum(xs)
    got = pairwise_dot(w, v)
    assert got == pytest.approx(expect, rel=1e-12, abs=1e-9)


def test_pairwise_dot_deterministic():
    rng = np.random.default_rng(7)
    w = rng.standard_normal(1000)
    v = rng.standard_normal(1000)
    assert pairwise_dot(w, v) == pairwise_dot(w.copy(), v.copy())
