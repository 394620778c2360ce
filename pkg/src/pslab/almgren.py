"""Frequency-function diagnostics: H, E, N, J, doubling, blow-down, and
the spherical Rayleigh quantities of the product-monotonicity machinery.

Conventions (N = grid dimension, beta carried everywhere):
    H(x0,r) = r^{1-N} int_{dB_r} (u^2 + v^2)
    E(x0,r) = r^{2-N} int_{B_r} (|grad u|^2 + |grad v|^2 + beta u^2 v^2)
    N(x0,r) = E/H   (local growth degree, nondecreasing in r)
    J(x0,r) = r^{-4} prod_{w in {u,v}} int_{B_r} (|grad w|^2 + beta u^2 v^2)
                                               / |y-x0|^{N-2} dy
The blow-down (u(x0+Rx)/sqrt(H), v(x0+Rx)/sqrt(H)) approaches the
one-dimensional pair (gamma x_N^+, gamma x_N^-) with gamma normalized by
gamma^2 int_{S^{N-1}} x_N^2 = 1.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateCenterError, InsufficientDataError, MisuseError
from .grid import GridSpec, ScalarField, SolutionPair, gradient_fields, interpolate
from .quadrature import PairSampler, SphereQuadrature, default_quadrature, \
    surface_measure, xn_second_moment

H_FLOOR = 1e-14
N_MONOTONE_SLACK = 5e-3
ACF_SLACK = 1e-3
DOUBLING_SLACK = 1e-3
DH_IDENTITY_RTOL = 0.02


@dataclass(frozen=True)
class Verdict:
    name: str
    passed: bool
    max_violation: float
    detail: str = ""


@dataclass(frozen=True)
class MonotonicityReport:
    x0: tuple
    radii: np.ndarray = field(repr=False)
    H: np.ndarray = field(repr=False)
    E: np.ndarray = field(repr=False)
    N: np.ndarray = field(repr=False)
    J: np.ndarray = field(repr=False)
    ball_mass: np.ndarray = field(repr=False)
    dH_identity: np.ndarray = field(repr=False)
    d_estimate: int
    d_distance: float
    verdicts: tuple


@dataclass(frozen=True)
class GammaConstant:
    dim: int
    gamma: float
    second_moment: float


@dataclass(frozen=True)
class BlowdownReport:
    x0: tuple
    R: float
    sup_distance: float
    H1_distance: float
    H_value: float
    ratio: float  # sqrt(H)/R


def _check_radii(pair, x0, radii):
    radii = np.asarray(radii, dtype=float)
    if len(radii) == 0 or np.any(np.diff(radii) <= 0):
        raise MisuseError("radii must be strictly increasing and nonempty")
    h = pair.grid.h
    if radii[0] < 4 * h:
        raise MisuseError(
            f"smallest radius {radii[0]} below 4h = {4 * h}; stencil noise "
            "dominates the frequency there")
    return radii


def _exprs(beta):
    def mass(u, v, gu, gv, x):
        return u * u + v * v

    def dirichlet(u, v, gu, gv, x):
        return (gu * gu).sum(axis=-1) + (gv * gv).sum(axis=-1) + beta * (u * v) ** 2

    def dirichlet2(u, v, gu, gv, x):
        return (gu * gu).sum(axis=-1) + (gv * gv).sum(axis=-1) + 2 * beta * (u * v) ** 2

    def acf_u(u, v, gu, gv, x):
        return (gu * gu).sum(axis=-1) + beta * (u * v) ** 2

    def acf_v(u, v, gu, gv, x):
        return (gv * gv).sum(axis=-1) + beta * (u * v) ** 2

    return mass, dirichlet, dirichlet2, acf_u, acf_v


def _scan_radius(sampler, x0, r, quad, beta, dim):
    """One pass over the shells of B_r sampling the pair once per shell
    and accumulating every integrand (plain ball integrals use the
    s^{N-1} measure, kernel-weighted ones the shell-identity factor s)."""
    from .quadrature import pairwise_dot
    n_shells = max(8, int(np.ceil(4 * r / sampler.grid.h)))
    s_vals = np.linspace(0.0, r, n_shells + 1)
    w = quad.weights
    rows = np.zeros((n_shells + 1, 4))  # mass, dirichlet, acf_u, acf_v averages
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    for k in range(1, n_shells + 1):
        pts = x0 + s_vals[k] * quad.nodes
        u, v, gu, gv = sampler.sample(pts)
        coup = beta * (u * v) ** 2
        gu2 = (gu * gu).sum(axis=-1)
        gv2 = (gv * gv).sum(axis=-1)
        rows[k, 0] = pairwise_dot(w, u * u + v * v)
        rows[k, 1] = pairwise_dot(w, gu2 + gv2 + coup)
        rows[k, 2] = pairwise_dot(w, gu2 + coup)
        rows[k, 3] = pairwise_dot(w, gv2 + coup)
    plain = s_vals[:, None] ** (dim - 1)
    kern = s_vals[:, None]
    mass_ball, dir_ball = np.trapezoid(plain * rows[:, :2], s_vals, axis=0)
    coup_ball = np.trapezoid(plain[:, 0] * (rows[:, 2] + rows[:, 3] - rows[:, 1]),
                             s_vals)
    ju, jv = np.trapezoid(kern * rows[:, 2:], s_vals, axis=0)
    H = rows[-1, 0]  # r^{1-N} int_{dB_r} = spherical average times nothing
    E = r ** (2 - dim) * dir_ball
    dH = 2 * r ** (1 - dim) * (dir_ball + coup_ball)
    J = r ** (-4) * ju * jv
    return H, E, mass_ball, dH, J


def almgren_scan(pair: SolutionPair, x0, radii, quad: SphereQuadrature = None,
                 sampler: PairSampler = None) -> MonotonicityReport:
    """Per-radius table of H, E, N, J, ball mass and verdicts at x0."""
    radii = _check_radii(pair, x0, radii)
    dim = pair.grid.dim
    if quad is None:
        quad = default_quadrature(dim)
    if sampler is None:
        sampler = PairSampler(pair)
    beta = pair.beta

    m = len(radii)
    H = np.empty(m)
    E = np.empty(m)
    J = np.empty(m)
    ball_mass = np.empty(m)
    dH_identity = np.empty(m)
    for k, r in enumerate(radii):
        max_r = pair.grid.max_radius(np.atleast_1d(np.asarray(x0, float)))
        if r > max_r:
            from .errors import OutOfDomainError
            raise OutOfDomainError(
                f"ball of radius {r} exits the box; max admissible radius "
                f"{max_r:.6g}", max_radius=max_r)
        H[k], E[k], ball_mass[k], dH_identity[k], J[k] = _scan_radius(
            sampler, x0, r, quad, beta, dim)
        if H[k] <= H_FLOOR:
            raise DegenerateCenterError(
                f"H({x0}, {r}) = {H[k]:.3e} below threshold; center degenerate")
    N = E / H

    verdicts = []
    dn = np.diff(N)
    worst = float(-dn.min()) if len(dn) else 0.0
    verdicts.append(Verdict("N nondecreasing", worst <= N_MONOTONE_SLACK, worst))
    dh = np.diff(H)
    worst_h = float(-dh.min()) if len(dh) else 0.0
    verdicts.append(Verdict("H nondecreasing", worst_h <= 0.0, worst_h))
    # difference-quotient dH/dr against the identity
    # d_r H = 2 r^{1-N} int_{B_r} (|grad u|^2 + |grad v|^2 + 2 beta u^2 v^2)
    steps = np.diff(radii)
    uniform = len(steps) > 0 and np.allclose(steps, steps[0], rtol=1e-10)
    if m >= 5 and uniform:
        # 4th-order centered stencil: exact through H ~ r^4, so the check
        # probes the identity rather than the quotient's truncation error
        dr = steps[0]
        dH_num = (-H[4:] + 8 * H[3:-1] - 8 * H[1:-3] + H[:-4]) / (12 * dr)
        ident = dH_identity[2:-2]
        rel = np.abs(dH_num - ident) / np.maximum(np.abs(ident), H_FLOOR)
        worst_id = float(rel.max())
    elif m >= 3:
        dH_num = np.gradient(H, radii)[1:-1]
        ident = dH_identity[1:-1]
        rel = np.abs(dH_num - ident) / np.maximum(np.abs(ident), H_FLOOR)
        worst_id = float(rel.max())
    else:
        worst_id = float("nan")
    verdicts.append(Verdict("dH/dr identity", worst_id <= DH_IDENTITY_RTOL,
                            worst_id, "centered difference vs ball integral"))

    d_est = int(round(N[-1]))
    return MonotonicityReport(
        x0=tuple(np.atleast_1d(np.asarray(x0, dtype=float))),
        radii=radii, H=H, E=E, N=N, J=J, ball_mass=ball_mass,
        dH_identity=dH_identity, d_estimate=d_est,
        d_distance=float(abs(N[-1] - d_est)), verdicts=tuple(verdicts))


def check_doubling(report: MonotonicityReport, d1, d2) -> Verdict:
    """Two-sided growth control of H by the frequency bounds d1 <= N <= d2:
    (r2/r1)^{2 d1} <= H(r2)/H(r1) <= e^{d2} (r2/r1)^{2 d2}."""
    N = report.N
    if d1 > N.min() + 1e-12:
        k = int(N.argmin())
        raise MisuseError(
            f"d1 = {d1} exceeds min N = {N.min():.6g} at r = {report.radii[k]:.6g}")
    if d2 < N.max() - 1e-12:
        k = int(N.argmax())
        raise MisuseError(
            f"d2 = {d2} below max N = {N.max():.6g} at r = {report.radii[k]:.6g}")
    worst = 0.0
    detail = ""
    r, H = report.radii, report.H
    for i in range(len(r)):
        for j in range(i + 1, len(r)):
            ratio = H[j] / H[i]
            rr = r[j] / r[i]
            lo = rr ** (2 * d1)
            hi = math.e ** d2 * rr ** (2 * d2)
            viol = max((lo - ratio) / lo, (ratio - hi) / hi)
            if viol > worst:
                worst = viol
                detail = f"pair (r1, r2) = ({r[i]:.6g}, {r[j]:.6g})"
    return Verdict("doubling", worst <= DOUBLING_SLACK, worst, detail)


def fit_acf_constant(radii, J, slack=ACF_SLACK):
    """Smallest C >= 0 making e^{-C r^{-1/2}} J nondecreasing within the
    relative slack."""
    C = 0.0
    for k in range(len(radii) - 1):
        if J[k] <= 0 or J[k + 1] <= 0:
            continue
        need = math.log(J[k] * (1 - slack) / J[k + 1])
        gap = radii[k] ** -0.5 - radii[k + 1] ** -0.5
        if need > 0:
            # headroom so the achieved violation sits strictly below slack
            C = max(C, need / gap * (1 + 1e-9))
    return C


def acf_scan(pair, x0, radii, quad=None, sampler=None):
    """J along the radii plus the fitted correction constant and its
    monotonicity verdict."""
    report = almgren_scan(pair, x0, radii, quad=quad, sampler=sampler)
    J = report.J
    C = fit_acf_constant(report.radii, J)
    corrected = np.exp(-C * report.radii ** -0.5) * J
    dc = np.diff(corrected)
    ref = np.maximum(np.abs(corrected[:-1]), 1e-300)
    worst = float((-dc / ref).max()) if len(dc) else 0.0
    verdict = Verdict("corrected J nondecreasing", worst <= ACF_SLACK, worst,
                      f"fitted C = {C:.6g}")
    return J, C, verdict


def spherical_rayleigh(pair, x0, r, quad=None, sampler=None):
    """(Lambda1, Lambda2, gamma_sum) at one sphere.

    Lambda_i = r^2 int (|grad_theta w|^2 + beta u^2 v^2) / int w^2, with
    the tangential part |grad w|^2 - (d_nu w)^2; gamma_sum =
    Gamma(Lambda1) + Gamma(Lambda2) enters the ACF differential
    inequality d/dr log J >= (-4 + 2 gamma_sum)/r.
    """
    dim = pair.grid.dim
    if quad is None:
        quad = default_quadrature(dim)
    if sampler is None:
        sampler = PairSampler(pair)
    beta = pair.beta

    def parts(u, v, gu, gv, x):
        nu = x / r
        dnu_u = (gu * nu).sum(axis=-1)
        dnu_v = (gv * nu).sum(axis=-1)
        tu = (gu * gu).sum(axis=-1) - dnu_u ** 2
        tv = (gv * gv).sum(axis=-1) - dnu_v ** 2
        coup = beta * (u * v) ** 2
        return np.stack([tu + coup, tv + coup, u * u, v * v], axis=0)

    vals = [sampler.sphere_integral(
        lambda u, v, gu, gv, x, i=i: parts(u, v, gu, gv, x)[i], x0, r, quad)
        for i in range(4)]
    num_u, num_v, den_u, den_v = vals
    if den_u <= H_FLOOR or den_v <= H_FLOOR:
        raise DegenerateCenterError("a component vanishes on the sphere")
    lam1 = r * r * num_u / den_u
    lam2 = r * r * num_v / den_v
    return lam1, lam2, gamma_fn(lam1, dim) + gamma_fn(lam2, dim)


def gamma_fn(t, dim):
    """Gamma(t) = sqrt(((N-2)/2)^2 + t) - (N-2)/2; the homogeneity degree
    of a harmonic function with spherical Rayleigh quotient t."""
    a = (dim - 2) / 2.0
    return math.sqrt(a * a + t) - a


def gamma_constant(dim) -> GammaConstant:
    """Normalizing slope gamma with gamma^2 int_{S^{N-1}} x_N^2 = 1."""
    if dim not in (2, 3):
        raise MisuseError("gamma_constant needs dim 2 or 3")
    quad = default_quadrature(dim)
    moment = float((quad.weights * quad.nodes[:, -1] ** 2).sum())
    closed = xn_second_moment(dim)
    if abs(moment - closed) > 1e-10:
        raise AssertionError("quadrature moment disagrees with |S^{N-1}|/N")
    return GammaConstant(dim=dim, gamma=1.0 / math.sqrt(moment),
                         second_moment=moment)


def linear_pair(grid: GridSpec, gamma=None) -> SolutionPair:
    """The blow-down limit (gamma x_N^+, gamma x_N^-) sampled on a grid."""
    if gamma is None:
        gamma = gamma_constant(grid.dim).gamma
    xn = grid.meshes()[-1]
    return SolutionPair(ScalarField(grid, gamma * np.maximum(xn, 0.0)),
                        ScalarField(grid, gamma * np.maximum(-xn, 0.0)))


def blow_down(pair: SolutionPair, x0, R, ref_grid: GridSpec,
              quad=None, sampler=None):
    """Rescaled pair (u(x0+Rx)/sqrt(H), v(x0+Rx)/sqrt(H)) on ref_grid
    plus its distance to (gamma x_N^+, gamma x_N^-) on B_1(0).

    The rescaled pair solves the system with coupling
    beta' = beta H(x0,R) R^2.
    """
    dim = pair.grid.dim
    if quad is None:
        quad = default_quadrature(dim)
    if sampler is None:
        sampler = PairSampler(pair)
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    mass = _exprs(pair.beta)[0]
    H = R ** (1 - dim) * sampler.sphere_integral(mass, x0, R, quad)
    if H <= H_FLOOR:
        raise DegenerateCenterError(f"H({tuple(x0)}, {R}) degenerate")
    s = 1.0 / math.sqrt(H)
    pts = np.stack([m.ravel() for m in ref_grid.meshes()], axis=1)
    up = s * interpolate(pair.u, x0 + R * pts).reshape(ref_grid.shape)
    vp = s * interpolate(pair.v, x0 + R * pts).reshape(ref_grid.shape)
    rescaled = SolutionPair(ScalarField(ref_grid, np.maximum(up, 0.0)),
                            ScalarField(ref_grid, np.maximum(vp, 0.0)),
                            beta=pair.beta * H * R * R)
    gamma = gamma_constant(dim).gamma
    xn = ref_grid.meshes()[-1]
    tu = gamma * np.maximum(xn, 0.0)
    tv = gamma * np.maximum(-xn, 0.0)
    rad2 = sum(m * m for m in ref_grid.meshes())
    inside = rad2 <= 1.0
    du = up - tu
    dv = vp - tv
    sup = float(max(np.abs(du[inside]).max(), np.abs(dv[inside]).max()))
    hN = ref_grid.h ** dim
    gdu = gradient_fields(ScalarField(ref_grid, du))
    gdv = gradient_fields(ScalarField(ref_grid, dv))
    g2 = sum(c.values ** 2 for c in gdu) + sum(c.values ** 2 for c in gdv)
    h1 = float(math.sqrt(((du ** 2 + dv ** 2 + g2)[inside]).sum() * hN))
    report = BlowdownReport(x0=tuple(x0), R=float(R), sup_distance=sup,
                            H1_distance=h1, H_value=float(H),
                            ratio=float(math.sqrt(H) / R))
    return rescaled, report


def growth_exponent(report: MonotonicityReport):
    """Half the log-log slope of H against r; consistent with mean N."""
    if len(report.radii) < 4:
        raise InsufficientDataError("growth fit needs at least 4 radii")
    A = np.vstack([np.log(report.radii), np.ones(len(report.radii))]).T
    coef, *_ = np.linalg.lstsq(A, np.log(report.H), rcond=None)
    p = float(coef[0] / 2.0)
    return p, float(abs(p - report.N.mean()))
