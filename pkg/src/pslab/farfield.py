"""Far-field structure probes: cross-term decay, moving planes,
directional monotonicity, one-dimensionality, level sets and strips.

Throughout, x_N is the last grid axis; the heteroclinic structure has u
vanishing as x_N -> -inf and v vanishing as x_N -> +inf, with both cross
terms u^p v^q decaying exponentially in |x_N|.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_banded

from .errors import InsufficientDataError, MisuseError, OutOfDomainError
from .grid import ScalarField, SolutionPair, gradient_fields

UNDERFLOW_FLOOR = 1e-300


@dataclass(frozen=True)
class DecayFit:
    p: float
    q: float
    slab: tuple
    rate: float
    amplitude: float
    r_squared: float
    rows_used: int


@dataclass(frozen=True)
class MovingPlaneReport:
    lam: float
    max_violation_u: float
    max_violation_v: float
    violating_node: tuple
    coverage: float  # fraction of {x_N > lam} with representable reflection


@dataclass(frozen=True)
class ConeProbe:
    nu: tuple
    region: tuple  # ("upper"|"lower", M)
    min_derivative: float


@dataclass(frozen=True)
class LevelSetExtent:
    c: float
    empty: bool
    min_xN: float
    max_xN: float
    column_hit_fraction: float


def _height_axis_values(grid):
    return grid.axis(grid.dim - 1)


def decay_fit(pair: SolutionPair, p, q, slab) -> DecayFit:
    """Log-linear fit of max_{x'} u^p v^q against x_N over the slab.

    Rows whose maximum underflows are dropped; fewer than 4 usable rows
    is an error.  rate < 0 witnesses exponential cross-term decay.
    """
    a, b = slab
    if not b > a:
        raise MisuseError("slab must satisfy b > a")
    grid = pair.grid
    xn = _height_axis_values(grid)
    rows = np.nonzero((xn >= a) & (xn <= b))[0]
    if len(rows) == 0:
        raise OutOfDomainError("slab does not intersect the grid")
    u, v = pair.u.values, pair.v.values
    heights, logs = [], []
    for j in rows:
        sl = (Ellipsis, j)
        m = float((u[sl] ** p * v[sl] ** q).max())
        if m > UNDERFLOW_FLOOR:
            heights.append(xn[j])
            logs.append(math.log(m))
    if len(heights) < 4:
        raise InsufficientDataError(
            f"only {len(heights)} usable rows in the slab (need 4)")
    x = np.asarray(heights)
    y = np.asarray(logs)
    A = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    pred = A @ coef
    ss_res = float(((y - pred) ** 2).sum())
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return DecayFit(p=p, q=q, slab=(float(a), float(b)), rate=float(coef[0]),
                    amplitude=float(coef[1]), r_squared=r2,
                    rows_used=len(heights))


def cosh_decay_oracle(K, A, L, n=2001):
    """Midpoint value of v'' = K v, v(+-L) = A, against the closed form
    A / cosh(sqrt(K) L).

    Discretized by the Numerov scheme (tridiagonal, 4th order), so the
    numeric midpoint tracks the closed form to O(h^4).
    Returns (numeric_mid, closed_form).
    """
    if not (K > 0 and A > 0 and L > 0):
        raise MisuseError("K, A, L must be positive")
    if n % 2 == 0:
        n += 1
    h = 2.0 * L / (n - 1)
    m = n - 2
    c = K * h * h / 12.0
    ab = np.zeros((3, m))
    ab[0, 1:] = 1.0 - c
    ab[1] = -2.0 - 10.0 * c
    ab[2, :-1] = 1.0 - c
    rhs = np.zeros(m)
    rhs[0] -= A * (1.0 - c)
    rhs[-1] -= A * (1.0 - c)
    vi = solve_banded((1, 1), ab, rhs)
    numeric_mid = float(vi[m // 2])
    return numeric_mid, A / math.cosh(math.sqrt(K) * L)


def cosh_decay_rate(K, A, L_list, n=2001):
    """Fitted exponential rate of the midpoint value across half-lengths;
    the lemma shape predicts a rate close to sqrt(K)."""
    L_list = sorted(L_list)
    if len(L_list) < 2:
        raise InsufficientDataError("need at least two half-lengths")
    ys = [math.log(cosh_decay_oracle(K, A, L, n=n)[0]) for L in L_list]
    A_mat = np.vstack([L_list, np.ones(len(L_list))]).T
    coef, *_ = np.linalg.lstsq(A_mat, np.asarray(ys), rcond=None)
    return float(-coef[0])


def _interp_height_slice(values, xn, y):
    """values interpolated along the last axis at height y."""
    k = int(np.clip(np.searchsorted(xn, y) - 1, 0, len(xn) - 2))
    f = (y - xn[k]) / (xn[k + 1] - xn[k])
    return (1.0 - f) * values[..., k] + f * values[..., k + 1]


def moving_plane_check(pair: SolutionPair, lam) -> MovingPlaneReport:
    """Reflection comparison across the plane {x_N = lam}: on T_lam =
    {x_N > lam} the solution should dominate its reflection,
    u(x', 2 lam - x_N) <= u(x) and v(x', 2 lam - x_N) >= v(x).

    Only heights whose reflection stays inside the box are testable; the
    covered fraction of the in-box band is reported.
    """
    grid = pair.grid
    xn = _height_axis_values(grid)
    lo_n, hi_n = grid.lo[-1], grid.hi[-1]
    band = np.nonzero(xn > lam)[0]
    if len(band) == 0:
        raise OutOfDomainError(f"band x_N > {lam} is empty in this box")
    testable = [j for j in band if lo_n - 1e-12 <= 2 * lam - xn[j] <= hi_n + 1e-12]
    if len(testable) == 0:
        raise OutOfDomainError(
            f"no height above lambda = {lam} has an in-box reflection")
    coverage = len(testable) / len(band)
    u, v = pair.u.values, pair.v.values
    worst_u = worst_v = 0.0
    node = None
    for j in testable:
        y = 2 * lam - xn[j]
        u_ref = _interp_height_slice(u, xn, y)
        v_ref = _interp_height_slice(v, xn, y)
        du = u_ref - u[..., j]
        dv = v[..., j] - v_ref
        mu = float(du.max())
        mv = float(dv.max())
        if mu > worst_u:
            worst_u = mu
            node = np.unravel_index(int(du.argmax()), du.shape) + (j,)
        if mv > worst_v:
            worst_v = mv
            node = np.unravel_index(int(dv.argmax()), dv.shape) + (j,)
    return MovingPlaneReport(lam=float(lam), max_violation_u=worst_u,
                             max_violation_v=worst_v,
                             violating_node=node if max(worst_u, worst_v) > 0 else None,
                             coverage=coverage)


def directional_monotonicity(pair: SolutionPair, nu, region) -> ConeProbe:
    """Minimum centered-difference directional derivative over a far
    half-space: <grad u, nu> on {x_N > M}, or -<grad v, nu> on
    {x_N < -M} for the lower variant."""
    nu = np.asarray(nu, dtype=float)
    if abs(np.linalg.norm(nu) - 1.0) > 1e-12:
        raise MisuseError("nu must be a unit vector")
    side, M = region
    grid = pair.grid
    which = pair.u if side == "upper" else pair.v
    grads = gradient_fields(which, order=2)
    deriv = sum(float(nu[d]) * grads[d].values for d in range(grid.dim))
    if side == "lower":
        deriv = -deriv
    xn_mesh = grid.meshes()[-1]
    core = np.zeros(grid.shape, dtype=bool)
    core[tuple(slice(1, -1) for _ in range(grid.dim))] = True
    if side == "upper":
        mask = core & (xn_mesh > M)
    elif side == "lower":
        mask = core & (xn_mesh < -M)
    else:
        raise MisuseError("region side must be 'upper' or 'lower'")
    if not mask.any():
        raise OutOfDomainError("probe region contains no interior nodes")
    return ConeProbe(nu=tuple(nu), region=(side, float(M)),
                     min_derivative=float(deriv[mask].min()))


def one_dimensionality_defect(pair: SolutionPair):
    """Max over heights of the x'-oscillation of u plus that of v,
    normalized by the pair's sup; zero exactly on 1D lifts."""
    if pair.grid.dim < 2:
        raise MisuseError("defect needs dim >= 2")
    u, v = pair.u.values, pair.v.values
    axes = tuple(range(pair.grid.dim - 1))
    osc = (u.max(axis=axes) - u.min(axis=axes)) \
        + (v.max(axis=axes) - v.min(axis=axes))
    sup = max(float(u.max()), float(v.max()))
    if sup == 0:
        return 0.0
    return float(osc.max()) / sup


def level_set_extent(pair: SolutionPair, c) -> LevelSetExtent:
    """x_N extent of {|u - v| < c} and the fraction of x'-columns that
    meet it; the set should be a bounded band around the interface."""
    if not c > 0:
        raise MisuseError("threshold c must be positive")
    d = np.abs(pair.u.values - pair.v.values)
    mask = d < c
    if not mask.any():
        return LevelSetExtent(c=float(c), empty=True, min_xN=math.nan,
                              max_xN=math.nan, column_hit_fraction=0.0)
    xn_mesh = pair.grid.meshes()[-1]
    hits = mask.any(axis=-1)
    return LevelSetExtent(
        c=float(c), empty=False,
        min_xN=float(xn_mesh[mask].min()), max_xN=float(xn_mesh[mask].max()),
        column_hit_fraction=float(hits.mean()))


def strip_bound_scan(pair: SolutionPair, M):
    """(sup of u + |grad u| on {x_N <= M}, sup of v + |grad v| on
    {x_N >= -M}); finite by construction, the trend across box sizes is
    the useful output."""
    grid = pair.grid
    xn_mesh = grid.meshes()[-1]
    gu = gradient_fields(pair.u)
    gv = gradient_fields(pair.v)
    mag_u = np.sqrt(sum(c.values ** 2 for c in gu))
    mag_v = np.sqrt(sum(c.values ** 2 for c in gv))
    lower = xn_mesh <= M
    upper = xn_mesh >= -M
    if not lower.any() or not upper.any():
        raise OutOfDomainError("strip does not intersect the grid")
    su = float((pair.u.values + mag_u)[lower].max())
    sv = float((pair.v.values + mag_v)[upper].max())
    return su, sv
