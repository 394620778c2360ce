"""Pure-numpy relaxation kernels (fallback backend).

The arithmetic here mirrors the compiled backend expression for
expression: same association order, no fused multiply-adds, so the two
backends produce bit-identical iterates.
"""

import numpy as np

BACKEND = "python"


def _checkerboard(shape):
    idx = np.indices(shape).sum(axis=0)
    return (idx % 2).astype(bool)


_MASK_CACHE = {}


def _interior_masks(shape):
    key = tuple(shape)
    if key not in _MASK_CACHE:
        core = tuple(slice(1, -1) for _ in shape)
        board = _checkerboard(shape)[core]
        _MASK_CACHE[key] = (~board, board)
    return _MASK_CACHE[key]


def relax_2d(a, b, beta, h2, omega):
    """One red-black SOR pass on the equation -lap a + beta a b^2 = 0.

    Updates `a` in place at interior nodes, flooring at 0 to preserve
    positivity under overrelaxation.  Same-color nodes share no stencil
    edges, so the simultaneous masked update equals sequential sweeping.
    """
    cb = h2 * beta
    core = (slice(1, -1), slice(1, -1))
    masks = _interior_masks(a.shape)
    for mask in masks:
        s = (a[:-2, 1:-1] + a[2:, 1:-1]) + (a[1:-1, :-2] + a[1:-1, 2:])
        denom = 4.0 + cb * (b[core] * b[core])
        new = a[core] + omega * (s / denom - a[core])
        new = np.where(new < 0.0, 0.0, new)
        a[core] = np.where(mask, new, a[core])


def relax_3d(a, b, beta, h2, omega):
    """3D variant of relax_2d (7-point stencil)."""
    cb = h2 * beta
    core = (slice(1, -1), slice(1, -1), slice(1, -1))
    masks = _interior_masks(a.shape)
    for mask in masks:
        s = ((a[:-2, 1:-1, 1:-1] + a[2:, 1:-1, 1:-1])
             + (a[1:-1, :-2, 1:-1] + a[1:-1, 2:, 1:-1])) \
            + (a[1:-1, 1:-1, :-2] + a[1:-1, 1:-1, 2:])
        denom = 6.0 + cb * (b[core] * b[core])
        new = a[core] + omega * (s / denom - a[core])
        new = np.where(new < 0.0, 0.0, new)
        a[core] = np.where(mask, new, a[core])


def residual_2d(a, b, beta, h2):
    """Max interior |lap_h a - beta a b^2| for the 5-point stencil."""
    core = (slice(1, -1), slice(1, -1))
    s = (a[:-2, 1:-1] + a[2:, 1:-1]) + (a[1:-1, :-2] + a[1:-1, 2:])
    r = (s - 4.0 * a[core]) / h2 - beta * (a[core] * (b[core] * b[core]))
    return float(np.abs(r).max())


def residual_3d(a, b, beta, h2):
    """3D variant of residual_2d (7-point stencil)."""
    core = (slice(1, -1), slice(1, -1), slice(1, -1))
    s = ((a[:-2, 1:-1, 1:-1] + a[2:, 1:-1, 1:-1])
         + (a[1:-1, :-2, 1:-1] + a[1:-1, 2:, 1:-1])) \
        + (a[1:-1, 1:-1, :-2] + a[1:-1, 1:-1, 2:])
    r = (s - 6.0 * a[core]) / h2 - beta * (a[core] * (b[core] * b[core]))
    return float(np.abs(r).max())
