"""Cartesian grids, sampled scalar fields, stencils and interpolation.

Everything downstream (solvers, frequency-function diagnostics, far-field
probes) works on these types.  Grids are box-shaped, node-centered and
isotropic: the stencils and the sphere/ball quadrature assume a single
spacing h in every direction.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import OutOfDomainError

ISOTROPY_TOL = 1e-12


@dataclass(frozen=True)
class GridSpec:
    """Node-centered box grid: n[d] nodes spanning [lo[d], hi[d]]."""

    lo: tuple
    hi: tuple
    n: tuple

    def __post_init__(self):
        lo = tuple(float(a) for a in np.atleast_1d(self.lo))
        hi = tuple(float(a) for a in np.atleast_1d(self.hi))
        n = tuple(int(a) for a in np.atleast_1d(self.n))
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "n", n)
        if not (len(lo) == len(hi) == len(n)):
            raise ValueError("lo, hi, n must have equal length")
        if self.dim not in (1, 2, 3):
            raise ValueError(f"dim must be 1, 2 or 3, got {self.dim}")
        for d in range(self.dim):
            if hi[d] <= lo[d]:
                raise ValueError(f"hi[{d}] must exceed lo[{d}]")
            if n[d] < 3:
                raise ValueError(f"need at least 3 nodes per axis, got n[{d}]={n[d]}")
        spacings = [(hi[d] - lo[d]) / (n[d] - 1) for d in range(self.dim)]
        if max(spacings) - min(spacings) > ISOTROPY_TOL:
            raise ValueError(f"anisotropic spacing {spacings}; grids must be isotropic")

    @property
    def dim(self):
        return len(self.n)

    @property
    def h(self):
        return (self.hi[0] - self.lo[0]) / (self.n[0] - 1)

    @property
    def shape(self):
        return self.n

    @property
    def size(self):
        return int(np.prod(self.n))

    def axis(self, d):
        return np.linspace(self.lo[d], self.hi[d], self.n[d])

    def meshes(self):
        """Coordinate arrays of shape self.shape ('ij' indexing)."""
        return np.meshgrid(*[self.axis(d) for d in range(self.dim)], indexing="ij")

    def contains(self, pts, margin_cells=0):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        m = margin_cells * self.h
        ok = np.ones(pts.shape[0], dtype=bool)
        for d in range(self.dim):
            ok &= (pts[:, d] >= self.lo[d] + m - 1e-12) & (pts[:, d] <= self.hi[d] - m + 1e-12)
        return ok

    def max_radius(self, x0, margin_cells=1):
        """Largest sphere radius around x0 staying inside the box margin."""
        x0 = np.atleast_1d(np.asarray(x0, dtype=float))
        m = margin_cells * self.h
        return float(min(min(x0[d] - self.lo[d], self.hi[d] - x0[d]) - m
                         for d in range(self.dim)))


@dataclass(frozen=True)
class ScalarField:
    """Values sampled at the nodes of a GridSpec (row-major layout)."""

    grid: GridSpec
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.ascontiguousarray(np.asarray(self.values, dtype=float).reshape(self.grid.shape))
        if not np.all(np.isfinite(v)):
            raise ValueError("field values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, grid, fn):
        return cls(grid, fn(*grid.meshes()))

    @classmethod
    def zeros(cls, grid):
        return cls(grid, np.zeros(grid.shape))

    def interpolate(self, pts):
        return interpolate(self, pts)


@dataclass(frozen=True)
class SolutionPair:
    """A (u, v) pair on one grid with coupling strength beta."""

    u: ScalarField
    v: ScalarField
    beta: float = 1.0
    check_positivity: bool = True

    def __post_init__(self):
        if self.u.grid != self.v.grid:
            raise ValueError("u and v must share one grid")
        if not self.beta >= 0:
            raise ValueError("beta must be nonnegative")
        if self.check_positivity:
            if self.u.values.min() < 0 or self.v.values.min() < 0:
                raise ValueError("u and v must be nonnegative everywhere")

    @property
    def grid(self):
        return self.u.grid


def laplacian(f: ScalarField) -> ScalarField:
    """Standard (2*dim+1)-point Laplacian; boundary nodes are set to 0.

    Second-order and exact on quadratic polynomials at interior nodes.
    """
    g = f.grid
    h2 = g.h * g.h
    v = f.values
    out = np.zeros_like(v)
    core = tuple(slice(1, -1) for _ in range(g.dim))
    acc = -2.0 * g.dim * v[core]
    for d in range(g.dim):
        lo_sl = tuple(slice(0, -2) if k == d else slice(1, -1) for k in range(g.dim))
        hi_sl = tuple(slice(2, None) if k == d else slice(1, -1) for k in range(g.dim))
        acc = acc + (v[lo_sl] + v[hi_sl])
    out[core] = acc / h2
    return ScalarField(g, out)


def interpolate(f: ScalarField, pts):
    """Multilinear interpolation; exact on multilinear functions.

    pts: point (dim,) or array (m, dim).  Points outside the box raise
    OutOfDomainError.
    """
    g = f.grid
    p = np.asarray(pts, dtype=float)
    single = p.ndim == 1
    p = np.atleast_2d(p)
    if p.shape[1] != g.dim:
        raise ValueError(f"points must have dim {g.dim}")
    if not np.all(g.contains(p)):
        raise OutOfDomainError("interpolation point outside the grid box")
    idx = []
    frac = []
    for d in range(g.dim):
        x = (p[:, d] - g.lo[d]) / g.h
        i = np.clip(np.floor(x).astype(np.intp), 0, g.n[d] - 2)
        idx.append(i)
        frac.append(x - i)
    out = np.zeros(p.shape[0])
    for corner in range(1 << g.dim):
        w = np.ones(p.shape[0])
        loc = []
        for d in range(g.dim):
            if corner >> d & 1:
                w = w * frac[d]
                loc.append(idx[d] + 1)
            else:
                w = w * (1.0 - frac[d])
                loc.append(idx[d])
        out += w * f.values[tuple(loc)]
    return float(out[0]) if single else out


def gradient_fields(f: ScalarField, order=4):
    """Node gradients by centered differences, one component per axis.

    Interior stencils are of the requested order (2 or 4); the rows next
    to the boundary fall back to lower-order centered/one-sided formulas.
    4th order keeps the smear of kinked fields (positive/negative parts)
    narrow enough for the frequency-function tolerances.
    """
    g = f.grid
    h = g.h
    comps = []
    for ax in range(g.dim):
        F = np.moveaxis(f.values, ax, 0)
        G = np.zeros_like(F)
        if order >= 4 and F.shape[0] >= 5:
            G[2:-2] = (-F[4:] + 8 * F[3:-1] - 8 * F[1:-3] + F[:-4]) / (12 * h)
            G[1] = (F[2] - F[0]) / (2 * h)
            G[-2] = (F[-1] - F[-3]) / (2 * h)
        else:
            G[1:-1] = (F[2:] - F[:-2]) / (2 * h)
        G[0] = (-3 * F[0] + 4 * F[1] - F[2]) / (2 * h)
        G[-1] = (3 * F[-1] - 4 * F[-2] + F[-3]) / (2 * h)
        comps.append(ScalarField(g, np.moveaxis(G, 0, ax)))
    return comps
