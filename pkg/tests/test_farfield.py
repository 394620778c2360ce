import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pslab import GridSpec, InsufficientDataError, MisuseError, ScalarField, \
    SolutionPair
from pslab.farfield import cosh_decay_oracle, cosh_decay_rate, decay_fit, \
    directional_monotonicity, level_set_extent, moving_plane_check, \
    one_dimensionality_defect, strip_bound_scan


def _exp_pair(rate=3.0, n=65):
    g = GridSpec((-1.0, -1.0), (1.0, 1.0), (n, n))
    xn = g.meshes()[-1]
    u = np.exp(rate * xn)
    v = np.exp(-rate * xn)
    return SolutionPair(ScalarField(g, u), ScalarField(g, v))


def test_decay_fit_recovers_exponential_rate():
    pair = _exp_pair(rate=3.0)
    fit = decay_fit(pair, 1, 2, (0.0, 1.0))
    # u v^2 = e^{-3 xN}
    assert fit.rate == pytest.approx(-3.0, rel=1e-10)
    assert fit.r_squared >= 1.0 - 1e-12


def test_decay_fit_needs_enough_rows():
    pair = _exp_pair(n=33)
    with pytest.raises(InsufficientDataError):
        decay_fit(pair, 1, 2, (0.9, 1.0))


@pytest.mark.parametrize("K,L", [(1.0, 3.0), (4.0, 3.0), (9.0, 5.0)])
def test_cosh_oracle_fourth_order(K, L):
    num, closed = cosh_decay_oracle(K, 1.0, L, n=2001)
    h = 2 * L / 2000
    assert abs(num / closed - 1) <= 5 * h * h


def test_cosh_oracle_guards():
    with pytest.raises(MisuseError):
        cosh_decay_oracle(-1.0, 1.0, 3.0)
    with pytest.raises(InsufficientDataError):
        cosh_decay_rate(4.0, 1.0, [3.0])


def test_cosh_decay_rate_tracks_sqrt_K():
    for K in (1.0, 4.0, 9.0):
        rate = cosh_decay_rate(K, 1.0, [3.0, 4.0, 5.0])
        assert rate == pytest.approx(math.sqrt(K), rel=2e-2)


@settings(max_examples=15, deadline=None)
@given(st.lists(st.floats(0.01, 2.0), min_size=4, max_size=8))
def test_moving_plane_clean_on_monotone_lifts(increments):
    # any strictly increasing odd-symmetrized profile passes every plane
    inc = np.asarray(increments)
    half = np.concatenate([[0.0], np.cumsum(inc)])
    vals = np.concatenate([-half[::-1][:-1], half])  # odd, increasing
    n = len(vals)
    g = GridSpec((-1.0, -1.0), (1.0, 1.0), (n, n))
    xn_idx = np.arange(n)
    u = np.maximum(vals[xn_idx], 0.0)[None, :].repeat(n, axis=0)
    v = np.maximum(-vals[xn_idx], 0.0)[None, :].repeat(n, axis=0)
    pair = SolutionPair(ScalarField(g, u), ScalarField(g, v))
    for lam in (-0.4, 0.0, 0.3):
        rep = moving_plane_check(pair, lam)
        assert rep.max_violation_u <= 1e-12
        assert rep.max_violation_v <= 1e-12


def test_moving_plane_detects_violation():
    g = GridSpec((-1.0, -1.0), (1.0, 1.0), (33, 33))
    xn = g.meshes()[-1]
    u = np.cos(math.pi * xn) + 1.0  # decreasing in |xN|: reflection wins
    pair = SolutionPair(ScalarField(g, u), ScalarField(g, u))
    rep = moving_plane_check(pair, 0.25)
    assert rep.max_violation_u > 1e-3


def test_directional_monotonicity_on_field(small_field):
    probe = directional_monotonicity(small_field, (0.0, 1.0), ("upper", 1.0))
    assert probe.min_derivative > 0
    probe_v = directional_monotonicity(small_field, (0.0, 1.0), ("lower", 1.0))
    assert probe_v.min_derivative > 0
    with pytest.raises(MisuseError):
        directional_monotonicity(small_field, (0.0, 0.0), ("upper", 1.0))


def test_one_dimensionality_defect(small_field):
    assert one_dimensionality_defect(small_field) <= 1e-6
    g = small_field.grid
    x1, _ = g.meshes()
    bump = SolutionPair(
        ScalarField(g, small_field.u.values + 0.01 * (1.0 + np.cos(x1))),
        small_field.v)
    assert one_dimensionality_defect(bump) > 1e-4


def test_level_set_extent_linear():
    g = GridSpec((-1.0, -1.0), (1.0, 1.0), (101, 101))
    xn = g.meshes()[-1]
    pair = SolutionPair(ScalarField(g, np.maximum(xn, 0.0)),
                        ScalarField(g, np.maximum(-xn, 0.0)))
    ext = level_set_extent(pair, 0.25)
    assert not ext.empty
    assert ext.min_xN == pytest.approx(-0.24, abs=0.03)
    assert ext.max_xN == pytest.approx(0.24, abs=0.03)
    assert ext.column_hit_fraction == 1.0


def test_strip_bound_scan(small_field):
    lo, hi = strip_bound_scan(small_field, 1.0)
    assert np.isfinite(lo) and np.isfinite(hi)
    assert lo > 0 and hi > 0
