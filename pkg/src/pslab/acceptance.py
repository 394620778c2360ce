"""Executable acceptance checks: ten criteria covering the exact-pair
oracles, the 1D and 2D solvers, frequency/ACF monotonicity, blow-down
convergence, segregation, the decay oracle, and determinism.

`run_all` prints one pass/fail line per criterion; each criterion
returns its sub-check table so failures name the violated bound.
"""

import math
import os
import sys
import time
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import almgren, farfield, segregation
from .grid import GridSpec, ScalarField, SolutionPair
from .io import fingerprint
from .profile1d import center_and_symmetry_defect, energy_invariant, \
    solve_heteroclinic
from .quadrature import PairSampler, default_quadrature
from .solver import SolveOptions, boundary_from_harmonic, \
    boundary_from_profile, lift_profile, solve

LINEAR_RADII = np.arange(0.2, 0.81, 0.1)
DEG2_RADII = np.arange(0.3, 0.81, 0.1)
FIELD_RADII = np.linspace(0.5, 2.7, 12)
FIELD_CENTERS = ((-2.0, 0.0), (0.0, 0.0), (2.0, 0.0))
BLOWDOWN_R = (2.0, 3.0, 4.0, 5.0, 6.0)
SEGREGATION_BETAS = (1.0, 4.0, 16.0, 64.0, 256.0)
SEGREGATION_AMPLITUDE = 10.0


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    checks: tuple  # (label, ok, value, bound) rows
    runtime: float

    def summary(self):
        status = "PASS" if self.passed else "FAIL"
        bad = [c[0] for c in self.checks if not c[1]]
        tail = f" [violated: {', '.join(bad)}]" if bad else ""
        return f"{status} criterion {self.number}: {self.name}{tail}"


class Context:
    """Caches the shared artifacts (profile, 2D field, scans)."""

    @cached_property
    def quad(self):
        return default_quadrature(2)

    @cached_property
    def linear_pair(self):
        g = GridSpec((-1.0, -1.0), (1.0, 1.0), (513, 513))
        xn = g.meshes()[-1]
        return SolutionPair(ScalarField(g, np.maximum(xn, 0.0)),
                            ScalarField(g, np.maximum(-xn, 0.0)))

    @cached_property
    def deg2_pair(self):
        g = GridSpec((-1.0, -1.0), (1.0, 1.0), (513, 513))
        x1, xn = g.meshes()
        psi = np.real((x1 + 1j * xn) ** 2)
        return SolutionPair(ScalarField(g, np.maximum(psi, 0.0)),
                            ScalarField(g, np.maximum(-psi, 0.0)))

    @cached_property
    def linear_report(self):
        return almgren.almgren_scan(self.linear_pair, (0.0, 0.0),
                                    LINEAR_RADII, quad=self.quad)

    @cached_property
    def deg2_report(self):
        return almgren.almgren_scan(self.deg2_pair, (0.0, 0.0),
                                    DEG2_RADII, quad=self.quad)

    @cached_property
    def profile(self):
        return solve_heteroclinic(L=30.0, n=6001, slope=1.0, tol=1e-10)

    @cached_property
    def field_grid(self):
        return GridSpec((-8.0, -8.0), (8.0, 8.0), (257, 257))

    @cached_property
    def field(self):
        bdry = boundary_from_profile(self.profile, self.field_grid)
        return solve(bdry, 1.0, SolveOptions(tol=1e-9)).pair

    @cached_property
    def field_sampler(self):
        return PairSampler(self.field)

    @cached_property
    def blowdown_reports(self):
        ref = GridSpec((-1.0, -1.0), (1.0, 1.0), (129, 129))
        return [almgren.blow_down(self.field, (0.0, 0.0), R, ref,
                                  quad=self.quad, sampler=self.field_sampler)[1]
                for R in BLOWDOWN_R]


def _result(number, name, checks, t0):
    checks = tuple(checks)
    return CriterionResult(number, name, all(c[1] for c in checks), checks,
                           time.time() - t0)


def criterion_1(ctx):
    """Exact linear pair: H, N, J against closed forms at 513^2."""
    t0 = time.time()
    rep = ctx.linear_report
    r = rep.radii
    h_err = float(np.abs(rep.H / (math.pi * r ** 2) - 1).max())
    n_err = float(np.abs(rep.N - 1).max())
    j_err = float(np.abs(rep.J / (math.pi ** 2 / 4) - 1).max())
    checks = [
        ("|H - pi r^2| rel", h_err <= 1e-3, h_err, 1e-3),
        ("|N - 1|", n_err <= 5e-3, n_err, 5e-3),
        ("|J - pi^2/4| rel", j_err <= 1e-2, j_err, 1e-2),
    ]
    return _result(1, "exact-linear diagnostics", checks, t0)


def criterion_2(ctx):
    """Degree-2 harmonic parts: frequency 2 and quartic doubling."""
    t0 = time.time()
    rep = ctx.deg2_report
    n_err = float(np.abs(rep.N - 2).max())
    i4, i8 = 1, 5  # radii 0.4 and 0.8
    ratio = rep.H[i8] / rep.H[i4]
    ratio_err = abs(ratio / 16.0 - 1)
    checks = [
        ("|N - 2|", n_err <= 1e-2, n_err, 1e-2),
        ("H(0.8)/H(0.4) = 16 rel", ratio_err <= 2e-2, ratio_err, 2e-2),
    ]
    return _result(2, "degree-2 oracle", checks, t0)


def criterion_3(ctx):
    """1D heteroclinic: monotone, symmetric, conservative, decaying."""
    t0 = time.time()
    p = ctx.profile
    mono = bool((np.diff(p.u) > 0).all() and (np.diff(p.v) < 0).all())
    _, defect = center_and_symmetry_defect(p)
    dev, _ = energy_invariant(p)
    fit = farfield.decay_fit(p.as_pair(), 1, 2, (7.5, 15.0))
    checks = [
        ("residual <= tol", p.residual_norm <= 1e-10, p.residual_norm, 1e-10),
        ("strict monotonicity", mono, mono, True),
        ("symmetry defect", defect <= 1e-6, defect, 1e-6),
        ("energy invariant rel", dev <= 1e-6, dev, 1e-6),
        ("decay rate < 0", fit.rate < 0, fit.rate, 0.0),
        ("decay r^2", fit.r_squared >= 0.99, fit.r_squared, 0.99),
    ]
    return _result(3, "1D heteroclinic", checks, t0)


def criterion_4(ctx):
    """2D lift exactness, moving planes, directional monotonicity."""
    t0 = time.time()
    pair = ctx.field
    defect = farfield.one_dimensionality_defect(pair)
    worst = 0.0
    for lam in np.linspace(-6.0, 6.0, 25):
        rep = farfield.moving_plane_check(pair, lam)
        worst = max(worst, rep.max_violation_u, rep.max_violation_v)
    # far region: smallest height with a clean exponential cross-term fit
    M = None
    for cand in np.linspace(0.0, 4.0, 9):
        fit = farfield.decay_fit(pair, 1, 2, (cand, 8.0))
        if fit.rate < 0 and fit.r_squared >= 0.99:
            M = float(cand)
            break
    checks = [("1D defect", defect <= 1e-6, defect, 1e-6),
              ("moving-plane violations", worst <= 1e-8, worst, 1e-8),
              ("far region found", M is not None, M, None)]
    if M is not None:
        s2, s5 = math.sqrt(2), math.sqrt(5)
        nus = [(0.0, 1.0), (1 / s2, 1 / s2), (-1 / s5, 2 / s5)]
        for nu in nus:
            probe = farfield.directional_monotonicity(pair, nu, ("upper", M))
            checks.append((f"d_nu u > 0, nu={nu}", probe.min_derivative > 0,
                           probe.min_derivative, 0.0))
    return _result(4, "2D lift + moving planes", checks, t0)


def criterion_5(ctx):
    """Blow-down trend toward (gamma x_N^+, gamma x_N^-)."""
    t0 = time.time()
    reports = ctx.blowdown_reports
    sups = np.asarray([r.sup_distance for r in reports])
    ratios = np.asarray([r.ratio for r in reports])
    gamma = almgren.gamma_constant(2).gamma
    band = float((ratios.max() - ratios.min()) / ratios.mean())
    checks = [
        ("sup distance strictly decreasing", bool((np.diff(sups) < 0).all()),
         sups.tolist(), None),
        ("final sup distance", sups[-1] <= 0.05, float(sups[-1]), 0.05),
        ("gamma = 1/sqrt(pi)", abs(gamma - 1 / math.sqrt(math.pi)) <= 1e-12,
         gamma, 1 / math.sqrt(math.pi)),
        ("sqrt(H)/R band width", band <= 0.30, band, 0.30),
    ]
    return _result(5, "blow-down trend", checks, t0)


def criterion_6(ctx):
    """Frequency monotonicity and the dH/dr identity on the 2D field."""
    t0 = time.time()
    checks = []
    for c in FIELD_CENTERS:
        rep = almgren.almgren_scan(ctx.field, c, FIELD_RADII, quad=ctx.quad,
                                   sampler=ctx.field_sampler)
        dn = np.diff(rep.N)
        worst = float(-dn.min())
        v_id = next(v for v in rep.verdicts if v.name == "dH/dr identity")
        checks.append((f"N nondecreasing at {c}", worst <= 5e-3, worst, 5e-3))
        checks.append((f"dH/dr identity at {c}",
                       v_id.max_violation <= 0.02, v_id.max_violation, 0.02))
    return _result(6, "frequency monotonicity on computed field", checks, t0)


def criterion_7(ctx):
    """Corrected ACF monotonicity plus exact spherical Rayleigh values."""
    t0 = time.time()
    checks = []
    for c in FIELD_CENTERS:
        _, C, verdict = almgren.acf_scan(ctx.field, c, FIELD_RADII,
                                         quad=ctx.quad,
                                         sampler=ctx.field_sampler)
        checks.append((f"fitted C >= 0 at {c}", C >= 0, C, 0.0))
        checks.append((f"corrected J nondecreasing at {c}", verdict.passed,
                       verdict.max_violation, 1e-3))
    lam1, lam2, gsum = almgren.spherical_rayleigh(ctx.linear_pair, (0.0, 0.0),
                                                  0.5, quad=ctx.quad)
    checks.append(("Lambda1 = 1", abs(lam1 - 1) <= 1e-2, lam1, 1e-2))
    checks.append(("Lambda2 = 1", abs(lam2 - 1) <= 1e-2, lam2, 1e-2))
    checks.append(("gamma_sum = 2", abs(gsum - 2) <= 2e-2, gsum, 2e-2))
    return _result(7, "ACF shape", checks, t0)


def criterion_8(ctx):
    """Segregation sweep metrics across beta."""
    t0 = time.time()
    g = GridSpec((-1.0, -1.0), (1.0, 1.0), (129, 129))
    bdry = boundary_from_harmonic(1, SEGREGATION_AMPLITUDE, g)
    tab = segregation.sweep(bdry, SEGREGATION_BETAS, SolveOptions(tol=1e-9),
                            alpha=0.9)
    ratio = float(tab.harm_residual[-1] / tab.harm_residual[0])
    hfac = float(tab.holder.max() / tab.holder.min())
    checks = [
        ("sweep complete", tab.complete, tab.complete, True),
        ("interaction strictly decreasing",
         bool((np.diff(tab.interaction) < 0).all()),
         tab.interaction.tolist(), None),
        ("sup uv strictly decreasing", bool((np.diff(tab.sup_uv) < 0).all()),
         tab.sup_uv.tolist(), None),
        ("harm_residual(256) <= 0.1 harm_residual(1)", ratio <= 0.1, ratio,
         0.1),
        ("holder factor", hfac <= 3.0, hfac, 3.0),
    ]
    return _result(8, "segregation sweep", checks, t0)


def criterion_9(ctx):
    """Tridiagonal decay oracle against the closed cosh form."""
    t0 = time.time()
    n = 2001
    checks = []
    for K in (1.0, 4.0, 9.0):
        for L in (3.0, 5.0):
            num, closed = farfield.cosh_decay_oracle(K, 1.0, L, n=n)
            h = 2 * L / (n - 1)
            rel = abs(num / closed - 1)
            checks.append((f"cosh K={K} L={L}", rel <= 5 * h * h, rel,
                           5 * h * h))
        rate = farfield.cosh_decay_rate(K, 1.0, [3.0, 4.0, 5.0], n=n)
        checks.append((f"rate K={K}", rate >= 0.9 * math.sqrt(K), rate,
                       0.9 * math.sqrt(K)))
    return _result(9, "decay lemma oracle", checks, t0)


def _pipeline_fingerprint():
    """Digest of the numeric outputs of criteria 1-5 computed from a
    fresh context (used to compare runs under different worker caps)."""
    ctx = Context()
    rep1 = ctx.linear_report
    rep2 = ctx.deg2_report
    prof = ctx.profile
    field = ctx.field
    blow = ctx.blowdown_reports
    return fingerprint([
        rep1.H, rep1.E, rep1.N, rep1.J,
        rep2.H, rep2.N,
        prof.u, prof.v,
        field.u.values, field.v.values,
        np.asarray([[r.sup_distance, r.H1_distance, r.ratio] for r in blow]),
    ])


def criterion_10(ctx):
    """Bit-identical reruns of criteria 1-5 under different thread caps."""
    t0 = time.time()
    key = "PSLAB_THREADS"
    saved = os.environ.get(key)
    digests = {}
    try:
        for threads in ("1", "8"):
            os.environ[key] = threads
            digests[threads] = _pipeline_fingerprint()
    finally:
        if saved is None:
            os.environ.pop(key, None)
        else:
            os.environ[key] = saved
    same = digests["1"] == digests["8"]
    checks = [("fingerprints identical", same, digests, True)]
    return _result(10, "determinism", checks, t0)


CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10)


def run_all(quick=False, stream=sys.stdout):
    ctx = Context()
    results = []
    funcs = CRITERIA[:5] if quick else CRITERIA
    for fn in funcs:
        res = fn(ctx)
        results.append(res)
        print(res.summary(), file=stream)
        for label, ok, value, bound in res.checks:
            if not ok:
                print(f"    {label}: value {value!r}, bound {bound!r}",
                      file=stream)
    return results
