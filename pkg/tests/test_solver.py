import numpy as np
import pytest

from pslab import ConfigError, GridSpec, SolveOptions, \
    UnsupportedConfigurationError, boundary_from_harmonic, \
    boundary_from_profile, lift_profile, solve
from pslab.solver import BoundaryData, coarse_profile, harmonic_polynomial, \
    optimal_omega, residual


def test_boundary_data_validation():
    g = GridSpec((-1.0, -1.0), (1.0, 1.0), (9, 9))
    bad = np.zeros(g.shape)
    bad[0, 3] = -1.0
    with pytest.raises(ValueError, match="nonnegative"):
        BoundaryData(g, bad, np.zeros(g.shape))
    with pytest.raises(ValueError, match="shape"):
        BoundaryData(g, np.zeros((5, 5)), np.zeros(g.shape))
    # negative interior entries are ignored: only the boundary is data
    interior_neg = np.zeros(g.shape)
    interior_neg[4, 4] = -1.0
    BoundaryData(g, interior_neg, np.zeros(g.shape))


def test_solve_options_validation():
    with pytest.raises(ValueError):
        SolveOptions(tol=0.0)
    with pytest.raises(ValueError):
        SolveOptions(omega=2.5)


def test_optimal_omega_range():
    g = GridSpec((-1.0, -1.0), (1.0, 1.0), (65, 65))
    w = optimal_omega(g)
    assert 1.0 < w < 2.0


def test_solver_rejects_1d_and_negative_beta():
    g1 = GridSpec((-1.0,), (1.0,), (33,))
    b1 = BoundaryData(g1, np.zeros(33), np.zeros(33))
    with pytest.raises(UnsupportedConfigurationError):
        solve(b1, 1.0)
    g = GridSpec((-1.0, -1.0), (1.0, 1.0), (9, 9))
    b = BoundaryData(g, np.zeros(g.shape), np.zeros(g.shape))
    with pytest.raises(ConfigError):
        solve(b, -1.0)


def test_solve_harmonic_boundary_small():
    g = GridSpec((-1.0, -1.0), (1.0, 1.0), (33, 33))
    bdry = boundary_from_harmonic(1, 1.0, g)
    res = solve(bdry, 1.0, SolveOptions(tol=1e-10))
    assert res.residual <= 1e-10
    u, v = res.pair.u.values, res.pair.v.values
    assert u.min() >= 0 and v.min() >= 0
    # degree-1 data in 2D is x_1^+/x_1^-: swap-symmetric under x_1 -> -x_1
    assert np.abs(u - v[::-1, :]).max() <= 1e-9
    ru, rv = residual(res.pair)
    assert max(ru, rv) <= 1e-10


def test_beta_zero_gives_harmonic_extension():
    g = GridSpec((-1.0, -1.0), (1.0, 1.0), (33, 33))
    x1, xn = g.meshes()
    trace = x1 * xn + 2.0  # positive harmonic function on the box
    bdry = BoundaryData(g, trace, trace)
    res = solve(bdry, 0.0, SolveOptions(tol=1e-11))
    assert np.abs(res.pair.u.values - trace).max() <= 1e-8


def test_warm_start_grid_mismatch():
    g = GridSpec((-1.0, -1.0), (1.0, 1.0), (17, 17))
    g2 = GridSpec((-2.0, -2.0), (2.0, 2.0), (17, 17))
    bdry = boundary_from_harmonic(1, 1.0, g)
    from pslab import ScalarField, SolutionPair
    init = SolutionPair(ScalarField.zeros(g2), ScalarField.zeros(g2))
    with pytest.raises(ConfigError):
        solve(bdry, 1.0, initial=init)


def test_coarse_profile_is_discrete_solution(profile):
    g = GridSpec((-4.0, -4.0), (4.0, 4.0), (65, 65))
    uline, vline = coarse_profile(profile, g)
    h = g.h
    ru = (uline[:-2] - 2 * uline[1:-1] + uline[2:]) / h ** 2 \
        - uline[1:-1] * vline[1:-1] ** 2
    rv = (vline[:-2] - 2 * vline[1:-1] + vline[2:]) / h ** 2 \
        - uline[1:-1] ** 2 * vline[1:-1]
    assert max(np.abs(ru).max(), np.abs(rv).max()) <= 1e-9


def test_profile_boundary_requires_covering_interval(profile):
    g = GridSpec((-20.0, -20.0), (20.0, 20.0), (33, 33))
    with pytest.raises(ConfigError):
        boundary_from_profile(profile, g)


def test_lift_matches_box_solve(profile, small_field):
    lift = lift_profile(profile, small_field.grid)
    du = np.abs(small_field.u.values - lift.u.values).max()
    dv = np.abs(small_field.v.values - lift.v.values).max()
    assert max(du, dv) <= 1e-7


def test_harmonic_polynomial_guards():
    g3 = GridSpec((-1.0,) * 3, (1.0,) * 3, (9,) * 3)
    assert harmonic_polynomial(1, 2.0, g3).max() == pytest.approx(2.0)
    with pytest.raises(UnsupportedConfigurationError):
        harmonic_polynomial(2, 1.0, g3)
    g = GridSpec((-1.0, -1.0), (1.0, 1.0), (9, 9))
    with pytest.raises(ConfigError):
        harmonic_polynomial(0, 1.0, g)


def test_solve_3d_small():
    g = GridSpec((-1.0,) * 3, (1.0,) * 3, (17,) * 3)
    bdry = boundary_from_harmonic(1, 1.0, g)
    res = solve(bdry, 1.0, SolveOptions(tol=1e-9))
    assert res.residual <= 1e-9
    u, v = res.pair.u.values, res.pair.v.values
    assert np.abs(u - v[:, :, ::-1]).max() <= 1e-8
