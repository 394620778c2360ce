"""Large-coupling sweeps: as beta grows the two components segregate,
the coexistence region and interaction energy shrink, and u - v
approaches a harmonic function while staying Hoelder-uniform.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import InsufficientDataError, MisuseError, NonConvergenceError
from .grid import ScalarField, SolutionPair, laplacian
from .solver import BoundaryData, SolveOptions, solve

HOLDER_SEED = 20260823
BOUNDARY_STANDOFF_CELLS = 10


@dataclass(frozen=True)
class SegregationTable:
    betas: np.ndarray = field(repr=False)
    sup_uv: np.ndarray = field(repr=False)
    interaction: np.ndarray = field(repr=False)
    harm_residual: np.ndarray = field(repr=False)
    holder: np.ndarray = field(repr=False)
    sweeps: np.ndarray = field(repr=False)
    alpha: float
    complete: bool
    pairs: tuple = field(repr=False, default=())


def metrics(pair: SolutionPair, alpha, min_sep=None):
    """(sup_uv, interaction, harm_residual, holder) for one pair."""
    u, v = pair.u.values, pair.v.values
    grid = pair.grid
    hN = grid.h ** grid.dim
    core = tuple(slice(1, -1) for _ in range(grid.dim))
    uv = u * v
    sup_uv = float(uv.max())
    interaction = float(pair.beta * ((uv[core] ** 2).sum()) * hN)
    diff = ScalarField(grid, u - v)
    harm = float(np.abs(laplacian(diff).values[core]).max())
    if min_sep is None:
        min_sep = 4 * grid.h
    hq = max(holder_quotient(pair.u, alpha, min_sep),
             holder_quotient(pair.v, alpha, min_sep))
    return sup_uv, interaction, harm, hq


def sweep(bdry: BoundaryData, betas, opts: SolveOptions = SolveOptions(),
          alpha=0.9) -> SegregationTable:
    """Solve along increasing beta with warm starts and fill the metric
    table; a nonconvergent solve flags a partial table."""
    betas = np.asarray(betas, dtype=float)
    if len(betas) < 3 or np.any(np.diff(betas) <= 0):
        raise MisuseError("betas must be strictly increasing, at least 3 values")
    if not 0 < alpha < 1:
        raise MisuseError("alpha must lie in (0, 1)")
    rows = []
    pairs = []
    prev = None
    complete = True
    for b in betas:
        try:
            res = solve(bdry, float(b), opts, initial=prev)
        except NonConvergenceError:
            complete = False
            break
        prev = res.pair
        pairs.append(res.pair)
        rows.append(metrics(res.pair, alpha) + (res.sweeps,))
    if not rows:
        raise NonConvergenceError("no beta value converged")
    arr = np.asarray(rows)
    k = len(rows)
    return SegregationTable(betas=betas[:k], sup_uv=arr[:, 0],
                            interaction=arr[:, 1], harm_residual=arr[:, 2],
                            holder=arr[:, 3], sweeps=arr[:, 4].astype(int),
                            alpha=alpha, complete=complete, pairs=tuple(pairs))


def holder_quotient(f: ScalarField, alpha, min_sep, n_random=4000,
                    seed=HOLDER_SEED):
    """Empirical C^{0,alpha} seminorm: max |f(x)-f(y)| / |x-y|^alpha over
    sampled interior node pairs.

    Pairs are stratified random (fixed seed, so the estimate is
    deterministic) plus all nearest-neighbor pairs when min_sep allows,
    restricted to the subbox at >= 10 cells from the boundary.
    """
    grid = f.grid
    if not 0 < alpha < 1:
        raise MisuseError("alpha must lie in (0, 1)")
    if min_sep < 2 * grid.h:
        raise MisuseError("min_sep must be at least 2h")
    s = BOUNDARY_STANDOFF_CELLS
    if any(n <= 2 * s + 2 for n in grid.n):
        raise InsufficientDataError("grid too small for the interior subbox")
    core = tuple(slice(s, -s) for _ in range(grid.dim))
    vals = f.values[core]
    meshes = [m[core] for m in grid.meshes()]
    flat = vals.ravel()
    coords = np.stack([m.ravel() for m in meshes], axis=1)
    npts = flat.size
    rng = np.random.default_rng(seed)
    i = rng.integers(0, npts, size=n_random)
    j = rng.integers(0, npts, size=n_random)
    d = np.linalg.norm(coords[i] - coords[j], axis=1)
    keep = d >= min_sep
    if keep.sum() < 100:
        raise InsufficientDataError("fewer than 100 admissible sampled pairs")
    q = np.abs(flat[i[keep]] - flat[j[keep]]) / d[keep] ** alpha
    best = float(q.max())
    # plus all axis-aligned pairs at the nearest admissible separation,
    # catching fine-scale oscillation the random sample can miss
    k = max(1, int(np.ceil(min_sep / grid.h - 1e-12)))
    sep = k * grid.h
    for ax in range(grid.dim):
        a = np.moveaxis(vals, ax, 0)
        if a.shape[0] > k:
            diffs = np.abs(a[k:] - a[:-k]) / sep ** alpha
            best = max(best, float(diffs.max()))
    return best


def interface_width(pair: SolutionPair, threshold):
    """Measure (node count times h^dim) of the coexistence superlevel
    set {u v > threshold}."""
    if not threshold > 0:
        raise MisuseError("threshold must be positive")
    grid = pair.grid
    count = int((pair.u.values * pair.v.values > threshold).sum())
    return count * grid.h ** grid.dim
