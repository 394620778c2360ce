import numpy as np
import pytest

from pslab import MisuseError, StructureError, solve_heteroclinic
from pslab.profile1d import Profile1D, center_and_symmetry_defect, \
    energy_invariant, rescale_profile


def test_residual_below_tolerance(profile):
    assert profile.residual_norm <= 1e-9


def test_strict_monotonicity(profile):
    assert np.all(np.diff(profile.u) > 0)
    assert np.all(np.diff(profile.v) < 0)


def test_nonnegativity_and_swap_symmetry(profile):
    assert profile.u.min() >= 0 and profile.v.min() >= 0
    # v is the reflection of u through the center
    t0, defect = center_and_symmetry_defect(profile)
    assert abs(t0) <= 1e-6
    assert defect <= 1e-6


def test_energy_invariant(profile):
    dev, q = energy_invariant(profile)
    assert dev <= 1e-6
    # the invariant equals slope^2 in the linear tails
    assert np.median(q) == pytest.approx(profile.slope ** 2, rel=1e-6)


def test_linear_tail_intercept(profile):
    t = profile.t
    sel = t >= 0.6 * profile.L
    drift = profile.u[sel] - (profile.slope * t[sel] + profile.intercept)
    assert np.abs(drift).max() <= 1e-6


def test_eval_floors_at_zero(profile):
    tt = np.linspace(-profile.L, profile.L, 4001)
    assert profile.eval_u(tt).min() >= 0
    assert profile.eval_v(tt).min() >= 0


def test_rescale_scaling_law(profile):
    lam = np.sqrt(2.0)
    q = rescale_profile(profile, lam)
    assert q.slope == pytest.approx(lam ** 2 * profile.slope, rel=1e-12)
    assert q.L == pytest.approx(profile.L / lam)
    assert q.residual_norm <= 1e-5


def test_misuse_guards():
    with pytest.raises(MisuseError):
        solve_heteroclinic(L=5.0, n=1001, slope=1.0, tol=1e-8)
    with pytest.raises(MisuseError):
        solve_heteroclinic(L=12.0, n=1000, slope=1.0, tol=1e-8)
    with pytest.raises(MisuseError):
        solve_heteroclinic(L=12.0, n=1001, slope=-1.0, tol=1e-8)
    with pytest.raises(MisuseError):
        solve_heteroclinic(L=12.0, n=1001, slope=1.0, tol=0.0)


def test_symmetry_defect_requires_crossing():
    n = 101
    t = np.linspace(-12.0, 12.0, n)
    p = Profile1D(L=12.0, n=n, u=t + 20.0, v=np.full(n, 1e-3), slope=1.0,
                  residual_norm=0.0, t0=0.0)
    with pytest.raises(StructureError):
        center_and_symmetry_defect(p)


def test_as_pair_roundtrip(profile):
    pair = profile.as_pair()
    assert pair.grid.dim == 1
    assert pair.grid.n[0] == profile.n
    assert np.array_equal(pair.u.values, profile.u)
