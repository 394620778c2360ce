import pytest

from pslab import GridSpec, SolveOptions, boundary_from_profile, solve, \
    solve_heteroclinic


@pytest.fixture(scope="session")
def profile():
    """Moderate-size heteroclinic shared across test modules."""
    return solve_heteroclinic(L=12.0, n=1201, slope=1.0, tol=1e-9)


@pytest.fixture(scope="session")
def small_field(profile):
    """Small 2D box solve with profile-lift boundary data."""
    grid = GridSpec((-4.0, -4.0), (4.0, 4.0), (65, 65))
    bdry = boundary_from_profile(profile, grid)
    return solve(bdry, 1.0, SolveOptions(tol=1e-9)).pair
