"""Red-black SOR solver for -lap u = -beta u v^2, -lap v = -beta u^2 v
on 2D/3D boxes with Dirichlet data.

The pointwise update u_i <- (sum of neighbors) / (2 dim + h^2 beta v_i^2)
is positivity preserving (positive numerator and denominator), and the
red-black coloring makes sweeps order-independent within a color, so the
iteration is deterministic irrespective of worker count.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import ConfigError, DivergenceError, NonConvergenceError, \
    UnsupportedConfigurationError
from .grid import GridSpec, ScalarField, SolutionPair
from .profile1d import Profile1D


@dataclass(frozen=True)
class BoundaryData:
    """Dirichlet data stored as full-shape arrays; only boundary entries
    are read by the solver, interior entries seed nothing."""

    grid: GridSpec
    u_bdry: np.ndarray = field(repr=False)
    v_bdry: np.ndarray = field(repr=False)
    kind: str = "custom"

    def __post_init__(self):
        for name in ("u_bdry", "v_bdry"):
            a = np.ascontiguousarray(getattr(self, name), dtype=float)
            if a.shape != self.grid.shape:
                raise ValueError(f"{name} must have grid shape {self.grid.shape}")
            mask = boundary_mask(self.grid.shape)
            vals = a[mask]
            if not np.all(np.isfinite(vals)):
                raise ValueError(f"{name} must be finite on the boundary")
            if vals.min() < 0:
                raise ValueError(f"{name} must be nonnegative on the boundary")
            a.setflags(write=False)
            object.__setattr__(self, name, a)


@dataclass(frozen=True)
class SolveOptions:
    tol: float = 1e-9
    max_sweeps: int = 200000
    omega: float = None  # None selects the near-optimal SOR factor
    log_every: int = 20

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.omega is not None and not 0 < self.omega < 2:
            raise ValueError("omega must lie in (0, 2)")


@dataclass(frozen=True)
class SolveResult:
    """Converged pair plus solver metadata."""

    pair: SolutionPair
    sweeps: int
    residual: float
    omega: float
    residual_history: tuple


def boundary_mask(shape):
    mask = np.zeros(shape, dtype=bool)
    for d in range(len(shape)):
        sl0 = tuple(0 if k == d else slice(None) for k in range(len(shape)))
        sl1 = tuple(-1 if k == d else slice(None) for k in range(len(shape)))
        mask[sl0] = True
        mask[sl1] = True
    return mask


def optimal_omega(grid: GridSpec):
    """Near-optimal SOR factor for the Laplace part of the operator."""
    n_min = min(grid.n)
    return 2.0 / (1.0 + math.sin(math.pi / (n_min - 1)))


def _apply_boundary(a, bdry_vals, mask):
    a[mask] = bdry_vals[mask]


def _relax_loop(u, v, beta, h2, omega, tol, max_sweeps, log_every):
    history = []
    sweeps = 0
    while sweeps < max_sweeps:
        for _ in range(log_every):
            kernels.relax(u, v, beta, h2, omega)
            kernels.relax(v, u, beta, h2, omega)
            sweeps += 1
        probe = (1,) * u.ndim
        if not (np.isfinite(u[probe]) and np.isfinite(v[probe])):
            if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
                raise DivergenceError(
                    "iteration produced non-finite values; try a smaller omega",
                    history=history)
        res = max(kernels.residual_eq(u, v, beta, h2),
                  kernels.residual_eq(v, u, beta, h2))
        if not np.isfinite(res):
            raise DivergenceError(
                "iteration produced non-finite values; try a smaller omega",
                history=history)
        history.append(res)
        if res <= tol:
            return sweeps, res, history
    raise NonConvergenceError(
        f"no convergence in {max_sweeps} sweeps (residual {history[-1]:.3e})",
        residual=history[-1], history=history)


def solve(bdry: BoundaryData, beta, opts: SolveOptions = SolveOptions(),
          initial: SolutionPair = None) -> SolveResult:
    """Solve the coupled system; beta = 0 degenerates to two Laplace
    solves (used for the harmonic initial extension).

    The initial guess is the harmonic extension of each boundary
    function unless `initial` supplies a warm start.  On divergence at
    an overrelaxed omega the solve restarts once with omega = 1.
    """
    if beta < 0:
        raise ConfigError("beta must be nonnegative")
    grid = bdry.grid
    if grid.dim not in (2, 3):
        raise UnsupportedConfigurationError("solver supports 2D and 3D grids")
    h2 = grid.h * grid.h
    omega = opts.omega if opts.omega is not None else optimal_omega(grid)
    mask = boundary_mask(grid.shape)

    def run(om):
        if initial is not None:
            if initial.grid != grid:
                raise ConfigError("warm start grid does not match boundary grid")
            u = initial.u.values.copy()
            v = initial.v.values.copy()
            _apply_boundary(u, bdry.u_bdry, mask)
            _apply_boundary(v, bdry.v_bdry, mask)
            pre = 0
        else:
            u = np.zeros(grid.shape)
            v = np.zeros(grid.shape)
            _apply_boundary(u, bdry.u_bdry, mask)
            _apply_boundary(v, bdry.v_bdry, mask)
            # harmonic extension: beta = 0 decouples the two equations
            pre, _, _ = _relax_loop(u, v, 0.0, h2, om, opts.tol,
                                    opts.max_sweeps, opts.log_every)
            np.maximum(u, 0.0, out=u)
            np.maximum(v, 0.0, out=v)
        if beta > 0:
            sweeps, res, history = _relax_loop(u, v, beta, h2, om, opts.tol,
                                               opts.max_sweeps, opts.log_every)
        else:
            sweeps = pre
            res = max(kernels.residual_eq(u, v, 0.0, h2),
                      kernels.residual_eq(v, u, 0.0, h2))
            history = [res]
        return u, v, sweeps, res, history

    try:
        u, v, sweeps, res, history = run(omega)
    except DivergenceError:
        if omega <= 1.0:
            raise
        omega = 1.0
        u, v, sweeps, res, history = run(omega)

    pair = SolutionPair(ScalarField(grid, u), ScalarField(grid, v), beta=beta)
    return SolveResult(pair=pair, sweeps=sweeps, residual=res, omega=omega,
                       residual_history=tuple(history))


def residual(pair: SolutionPair):
    """(r_u, r_v): max interior residuals of the two equations."""
    h2 = pair.grid.h ** 2
    # fields are stored read-only; the kernels take writable buffers
    u = pair.u.values.copy()
    v = pair.v.values.copy()
    return (kernels.residual_eq(u, v, pair.beta, h2),
            kernels.residual_eq(v, u, pair.beta, h2))


def coarse_profile(p: Profile1D, grid: GridSpec):
    """The profile re-solved on the grid's own height axis.

    Interpolating the fine-grid profile leaves an O(h^2) defect against
    the coarse discrete operator; pinning such data on the boundary
    would force an O(h^2) x'-dependence into the box solution.  A short
    Newton run on the height axis (Dirichlet data from the profile ends,
    interpolated profile as the guess) removes that inconsistency.
    Returns (u_line, v_line) on grid.axis(-1).
    """
    from .profile1d import _newton, _residual_norm
    if grid.lo[-1] < -p.L - 1e-12 or grid.hi[-1] > p.L + 1e-12:
        raise ConfigError(
            f"grid x_N range [{grid.lo[-1]}, {grid.hi[-1]}] exceeds the "
            f"profile interval [-{p.L}, {p.L}]")
    t = grid.axis(grid.dim - 1)
    h = t[1] - t[0]
    u = p.eval_u(t)
    v = p.eval_v(t)
    # roundoff floor of the measured residual, with headroom
    tol = max(200 * np.finfo(float).eps * max(u.max(), v.max()) / h**2, 1e-13)
    if _residual_norm(u, v, h) > tol:
        u, v, _, _, _ = _newton(u, v, h, tol, 60)
    return u, v


def boundary_from_profile(p: Profile1D, grid: GridSpec,
                          coarse_consistent=True) -> BoundaryData:
    """Dirichlet trace of the 1D lift u(x) = p.u(x_N), x_N the last axis."""
    if coarse_consistent:
        uline, vline = coarse_profile(p, grid)
        idx = np.arange(grid.n[-1])
        shape = (1,) * (grid.dim - 1) + (-1,)
        u = np.broadcast_to(uline[idx].reshape(shape), grid.shape).copy()
        v = np.broadcast_to(vline[idx].reshape(shape), grid.shape).copy()
        return BoundaryData(grid, u, v, kind="profile-lift")
    if grid.lo[-1] < -p.L - 1e-12 or grid.hi[-1] > p.L + 1e-12:
        raise ConfigError(
            f"grid x_N range [{grid.lo[-1]}, {grid.hi[-1]}] exceeds the "
            f"profile interval [-{p.L}, {p.L}]")
    xn = grid.meshes()[-1]
    return BoundaryData(grid, p.eval_u(xn), p.eval_v(xn), kind="profile-lift")


def lift_profile(p: Profile1D, grid: GridSpec,
                 coarse_consistent=True) -> SolutionPair:
    """The full 1D lift as a pair (exact solution of the box system up
    to the 1D residual); also usable as a warm start."""
    if coarse_consistent:
        uline, vline = coarse_profile(p, grid)
        shape = (1,) * (grid.dim - 1) + (-1,)
        u = np.broadcast_to(uline.reshape(shape), grid.shape).copy()
        v = np.broadcast_to(vline.reshape(shape), grid.shape).copy()
        return SolutionPair(ScalarField(grid, u), ScalarField(grid, v))
    xn = grid.meshes()[-1]
    return SolutionPair(ScalarField(grid, p.eval_u(xn)),
                        ScalarField(grid, p.eval_v(xn)))


def harmonic_polynomial(d, amplitude, grid: GridSpec):
    """amplitude * Re((x_1 + i x_N)^d) sampled on the grid (2D); in 3D
    only d = 1, giving amplitude * x_N."""
    if d < 1:
        raise ConfigError("degree must be at least 1")
    if grid.dim == 2:
        x1, xn = grid.meshes()
        z = x1 + 1j * xn
        return amplitude * np.real(z ** d)
    if grid.dim == 3:
        if d != 1:
            raise UnsupportedConfigurationError(
                "3D harmonic boundary data supports degree 1 only")
        return amplitude * grid.meshes()[-1]
    raise UnsupportedConfigurationError("harmonic data needs a 2D or 3D grid")


def boundary_from_harmonic(d, amplitude, grid: GridSpec) -> BoundaryData:
    """Boundary data u = Psi^+, v = Psi^- for a degree-d harmonic Psi."""
    psi = harmonic_polynomial(d, amplitude, grid)
    return BoundaryData(grid, np.maximum(psi, 0.0), np.maximum(-psi, 0.0),
                        kind="harmonic-trace")
