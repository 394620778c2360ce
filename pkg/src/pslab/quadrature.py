"""Sphere and ball quadrature on box grids.

Provides unit-sphere node/weight sets (trapezoid in 2D, Gauss-Legendre x
uniform azimuth in 3D), sphere integrals of expressions in (u, v, grad u,
grad v), and singular ball integrals via the shell identity

    int_{B_r} g(y) |y-x0|^{2-N} dy = int_0^r s (int_{S^{N-1}} g(x0+s w) dw) ds

which removes the kernel singularity uniformly in the dimension.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import OutOfDomainError
from .grid import ScalarField, SolutionPair, gradient_fields, interpolate

DEFAULT_ANGLES_2D = 720
DEFAULT_POLAR_3D = 48
DEFAULT_AZIMUTH_3D = 96


@dataclass(frozen=True)
class SphereQuadrature:
    """Unit-sphere quadrature: nodes (m, dim) and positive weights (m,)."""

    dim: int
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "nodes", np.ascontiguousarray(self.nodes, dtype=float))
        object.__setattr__(self, "weights", np.ascontiguousarray(self.weights, dtype=float))
        if self.weights.min() <= 0:
            raise ValueError("quadrature weights must be positive")
        total = surface_measure(self.dim)
        if abs(self.weights.sum() - total) > 1e-10:
            raise ValueError("weights do not sum to the sphere measure")

    @classmethod
    def build(cls, dim, n_angles=DEFAULT_ANGLES_2D, n_polar=DEFAULT_POLAR_3D,
              n_azimuth=DEFAULT_AZIMUTH_3D):
        if dim == 1:
            nodes = np.array([[-1.0], [1.0]])
            weights = np.array([1.0, 1.0])
        elif dim == 2:
            # periodic trapezoid rule: spectrally accurate on smooth integrands
            th = 2 * np.pi * np.arange(n_angles) / n_angles
            nodes = np.stack([np.cos(th), np.sin(th)], axis=1)
            weights = np.full(n_angles, 2 * np.pi / n_angles)
        elif dim == 3:
            # Gauss-Legendre in cos(polar angle around the x_N axis)
            mu, wmu = np.polynomial.legendre.leggauss(n_polar)
            ph = 2 * np.pi * np.arange(n_azimuth) / n_azimuth
            wph = 2 * np.pi / n_azimuth
            s = np.sqrt(1.0 - mu * mu)
            nx = np.outer(s, np.cos(ph)).ravel()
            ny = np.outer(s, np.sin(ph)).ravel()
            nz = np.repeat(mu, n_azimuth)
            nodes = np.stack([nx, ny, nz], axis=1)
            weights = np.repeat(wmu * wph, n_azimuth)
        else:
            raise ValueError(f"dim must be 1, 2 or 3, got {dim}")
        return cls(dim, nodes, weights)


def surface_measure(dim):
    """|S^{N-1}|: 2 in 1D, 2 pi in 2D, 4 pi in 3D."""
    return {1: 2.0, 2: 2 * np.pi, 3: 4 * np.pi}[dim]


def xn_second_moment(dim):
    """int_{S^{N-1}} x_N^2 dsigma, closed form |S^{N-1}|/N."""
    return surface_measure(dim) / dim


class PairSampler:
    """Caches node gradients of a pair and evaluates sphere expressions.

    Expressions are callables expr(u, v, gu, gv, x_rel) with u, v scalars
    or arrays, gu/gv gradient stacks of shape (..., dim), x_rel the
    coordinates relative to the sphere center.  Gradient components are
    4th-order centered differences at the nodes, then multilinearly
    interpolated to the sphere points.
    """

    def __init__(self, pair: SolutionPair, grad_order=4):
        self.pair = pair
        self.grid = pair.grid
        self._gu = gradient_fields(pair.u, order=grad_order)
        self._gv = gradient_fields(pair.v, order=grad_order)

    def sample(self, pts):
        """(u, v, gu, gv) at the given points, gradients shape (m, dim)."""
        u = interpolate(self.pair.u, pts)
        v = interpolate(self.pair.v, pts)
        gu = np.stack([interpolate(c, pts) for c in self._gu], axis=-1)
        gv = np.stack([interpolate(c, pts) for c in self._gv], axis=-1)
        return u, v, gu, gv

    def _sphere_points(self, x0, r, quad):
        x0 = np.atleast_1d(np.asarray(x0, dtype=float))
        max_r = self.grid.max_radius(x0, margin_cells=1)
        if r > max_r:
            raise OutOfDomainError(
                f"sphere of radius {r} exits the box; max admissible radius {max_r:.6g}",
                max_radius=max_r)
        return x0 + r * quad.nodes

    def sphere_average(self, expr, x0, r, quad):
        """Sum of w_k expr(...) over the unit-sphere nodes at radius r."""
        pts = self._sphere_points(x0, r, quad)
        u, v, gu, gv = self.sample(pts)
        vals = expr(u, v, gu, gv, pts - np.atleast_1d(np.asarray(x0, dtype=float)))
        return pairwise_dot(quad.weights, np.asarray(vals, dtype=float))

    def sphere_integral(self, expr, x0, r, quad):
        """int_{dB_r(x0)} expr = r^{N-1} sum_k w_k expr(x0 + r w_k)."""
        return r ** (self.grid.dim - 1) * self.sphere_average(expr, x0, r, quad)

    def shell_ball_integral(self, expr, x0, r, quad, n_shells=None):
        """int_{B_r(x0)} expr(y) |y-x0|^{2-N} dy via the shell identity.

        Composite trapezoid in the shell radius s of s * (spherical
        average); the s factor kills the kernel singularity at s = 0.
        """
        if n_shells is None:
            n_shells = max(8, int(np.ceil(4 * r / self.grid.h)))
        if n_shells < 8:
            raise ValueError("n_shells must be at least 8")
        x0 = np.atleast_1d(np.asarray(x0, dtype=float))
        max_r = self.grid.max_radius(x0, margin_cells=1)
        if r > max_r:
            raise OutOfDomainError(
                f"ball of radius {r} exits the box; max admissible radius {max_r:.6g}",
                max_radius=max_r)
        s = np.linspace(0.0, r, n_shells + 1)
        vals = np.zeros(n_shells + 1)
        for k in range(1, n_shells + 1):
            vals[k] = s[k] * self.sphere_average(expr, x0, s[k], quad)
        return float(np.trapezoid(vals, s))

    def ball_integral(self, expr, x0, r, quad, n_shells=None):
        """Plain int_{B_r(x0)} expr dy = int_0^r s^{N-1} (sph. avg) ds."""
        if n_shells is None:
            n_shells = max(8, int(np.ceil(4 * r / self.grid.h)))
        x0 = np.atleast_1d(np.asarray(x0, dtype=float))
        max_r = self.grid.max_radius(x0, margin_cells=1)
        if r > max_r:
            raise OutOfDomainError(
                f"ball of radius {r} exits the box; max admissible radius {max_r:.6g}",
                max_radius=max_r)
        s = np.linspace(0.0, r, n_shells + 1)
        vals = np.zeros(n_shells + 1)
        for k in range(1, n_shells + 1):
            vals[k] = s[k] ** (self.grid.dim - 1) * self.sphere_average(expr, x0, s[k], quad)
        return float(np.trapezoid(vals, s))


def pairwise_dot(w, v):
    """Deterministic dot product via fixed pairwise tree reduction.

    Bit-reproducible regardless of worker count or chunking.
    """
    acc = np.ascontiguousarray(w * v, dtype=float)
    while acc.size > 1:
        half = acc.size // 2
        head = acc[: 2 * half]
        acc = np.concatenate([head[0::2] + head[1::2], acc[2 * half:]])
    return float(acc[0]) if acc.size else 0.0


def default_quadrature(dim):
    return SphereQuadrature.build(dim)


def expr_mass(u, v, gu, gv, x):
    return u * u + v * v


def expr_dirichlet(beta):
    def f(u, v, gu, gv, x):
        return (gu * gu).sum(axis=-1) + (gv * gv).sum(axis=-1) + beta * (u * v) ** 2
    return f


def expr_one(u, v, gu, gv, x):
    return np.ones_like(np.asarray(u, dtype=float))
