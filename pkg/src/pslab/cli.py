"""Command-line entry point.

Subcommands: solve1d, solve2d, diagnose, blowdown, asymptotics,
segregate, verify.  Every run writes a manifest.json next to its output
recording the resolved configuration, input digests and a determinism
fingerprint of the emitted numeric arrays.

Exit codes: 0 success, 2 configuration errors, 3 numeric failures
(nonconvergence, degenerate centers, out-of-domain geometry).
"""

import argparse
import json
import os
import sys
import time

import numpy as np

from . import __version__, almgren, farfield, io, segregation
from .errors import ConfigError, DegenerateCenterError, InsufficientDataError, \
    MisuseError, NonConvergenceError, OutOfDomainError, PslabError, \
    StructureError, UnsupportedConfigurationError
from .grid import GridSpec
from .profile1d import center_and_symmetry_defect, solve_heteroclinic
from .quadrature import PairSampler, default_quadrature
from .solver import SolveOptions, boundary_from_harmonic, \
    boundary_from_profile, solve

CONFIG_ERRORS = (ConfigError, MisuseError, UnsupportedConfigurationError)
NUMERIC_ERRORS = (NonConvergenceError, DegenerateCenterError,
                  OutOfDomainError, StructureError, InsufficientDataError)


def _parse_center(text, dim):
    parts = [float(p) for p in text.split(",")]
    if len(parts) != dim:
        raise ConfigError(f"center {text!r} has {len(parts)} coordinates, "
                          f"field has dim {dim}")
    return parts


def _parse_radii(text):
    # r0:r1:k is an inclusive linspace; a comma list is taken verbatim
    if ":" in text:
        r0, r1, k = text.split(":")
        return np.linspace(float(r0), float(r1), int(k))
    return np.asarray([float(p) for p in text.split(",")])


def _manifest(out_path, subcommand, config, inputs, outputs, t0, arrays):
    config = {k: v for k, v in dict(config).items()
              if k not in ("fn", "subcommand")}
    config["PSLAB_THREADS"] = os.environ.get("PSLAB_THREADS", "")
    path = os.path.join(os.path.dirname(os.path.abspath(out_path)),
                        "manifest.json")
    return io.write_manifest(path, version=__version__, subcommand=subcommand,
                             config=config, inputs=inputs, outputs=outputs,
                             wall_time=time.time() - t0, arrays=arrays)


def _cmd_solve1d(args):
    t0 = time.time()
    prof = solve_heteroclinic(args.L, args.n, args.slope, args.tol)
    _, defect = center_and_symmetry_defect(prof)
    io.write_field(args.out, prof.as_pair(), extra={
        "slope": prof.slope, "t0": prof.t0,
        "residual_norm": prof.residual_norm, "symmetry_defect": defect,
        "intercept": prof.intercept})
    config = {k: v for k, v in vars(args).items() if k not in ("fn", "subcommand")}
    _manifest(args.out, "solve1d", config, [], [args.out], t0,
              [prof.u, prof.v])
    return 0


def _load_config(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: malformed JSON at line {exc.lineno} "
                          f"column {exc.colno}: {exc.msg}") from exc


def _require(cfg, key, path="config"):
    cur = cfg
    for part in key.split("."):
        if not isinstance(cur, dict) or part not in cur:
            raise ConfigError(f"missing key {path}.{key}")
        cur = cur[part]
    return cur


def _grid_from_config(cfg):
    g = _require(cfg, "grid")
    try:
        return GridSpec(tuple(_require(g, "lo", "config.grid")),
                        tuple(_require(g, "hi", "config.grid")),
                        tuple(_require(g, "n", "config.grid")))
    except ValueError as exc:
        raise ConfigError(f"config.grid: {exc}") from exc


def _boundary_from_config(cfg, grid):
    b = _require(cfg, "boundary")
    kind = _require(b, "kind", "config.boundary")
    if kind == "profile":
        path = _require(b, "profile_file", "config.boundary")
        pair, meta = io.read_field(path)
        if pair.grid.dim != 1:
            raise ConfigError(f"{path}: profile file must be 1D")
        from .profile1d import Profile1D
        prof = Profile1D(L=pair.grid.hi[0], n=pair.grid.n[0],
                         u=pair.u.values, v=pair.v.values,
                         slope=float(meta.get("slope", 1.0)),
                         residual_norm=float(meta.get("residual_norm", 0.0)),
                         t0=float(meta.get("t0", 0.0)))
        return boundary_from_profile(prof, grid), [path]
    if kind == "harmonic":
        return boundary_from_harmonic(int(_require(b, "degree", "config.boundary")),
                                      float(b.get("amplitude", 1.0)), grid), []
    raise ConfigError(f"config.boundary.kind: unknown kind {kind!r}")


def _cmd_solve2d(args):
    t0 = time.time()
    cfg = _load_config(args.config)
    grid = _grid_from_config(cfg)
    bdry, inputs = _boundary_from_config(cfg, grid)
    opts = SolveOptions(tol=float(cfg.get("tol", 1e-9)),
                        max_sweeps=int(cfg.get("max_sweeps", 200000)),
                        omega=cfg.get("omega"))
    res = solve(bdry, float(cfg.get("beta", 1.0)), opts)
    io.write_field(args.out, res.pair, extra={
        "sweeps": res.sweeps, "residual": res.residual, "omega": res.omega})
    _manifest(args.out, "solve2d", cfg, [args.config] + inputs, [args.out],
              t0, [res.pair.u.values, res.pair.v.values])
    return 0


def _cmd_diagnose(args):
    t0 = time.time()
    pair, _ = io.read_field(args.field)
    x0 = _parse_center(args.center, pair.grid.dim)
    radii = _parse_radii(args.radii)
    report = almgren.almgren_scan(pair, x0, radii)
    _, C, acf_verdict = almgren.acf_scan(pair, x0, radii)
    rows = zip(report.radii, report.H, report.E, report.N, report.J,
               report.ball_mass)
    io.write_csv(args.out, ["r", "H", "E", "N", "J", "ball_mass"], rows)
    sidecar = os.path.splitext(args.out)[0] + ".json"
    with open(sidecar, "w") as fh:
        json.dump({
            "d_estimate": report.d_estimate,
            "d_distance": report.d_distance,
            "acf_constant": C,
            "verdicts": [vars(v) for v in report.verdicts + (acf_verdict,)],
        }, fh, indent=2)
    _manifest(args.out, "diagnose", vars(args), [args.field],
              [args.out, sidecar], t0,
              [report.radii, report.H, report.E, report.N, report.J,
               report.ball_mass])
    return 0


def _cmd_blowdown(args):
    t0 = time.time()
    pair, _ = io.read_field(args.field)
    x0 = _parse_center(args.center, pair.grid.dim)
    R_list = [float(p) for p in args.R_list.split(",")]
    dim = pair.grid.dim
    ref = GridSpec((-1.0,) * dim, (1.0,) * dim, (args.ref_n,) * dim)
    sampler = PairSampler(pair)
    quad = default_quadrature(dim)
    rows = []
    for R in R_list:
        _, rep = almgren.blow_down(pair, x0, R, ref, quad=quad, sampler=sampler)
        rows.append((R, rep.sup_distance, rep.H1_distance, rep.ratio))
    io.write_csv(args.out, ["R", "sup_dist", "H1_dist", "ratio"], rows)
    _manifest(args.out, "blowdown", vars(args), [args.field], [args.out], t0,
              [np.asarray(rows)])
    return 0


def _fit_far_height(pair, p=1, q=2, r2_target=0.99):
    """Smallest slab start M with an exponential fit of quality r^2 >=
    target on [M, top]; falls back to the midpoint if none qualifies."""
    hi = pair.grid.hi[-1]
    heights = np.linspace(0.0, hi / 2, 9)
    for M in heights:
        try:
            fit = farfield.decay_fit(pair, p, q, (M, hi))
        except (InsufficientDataError, OutOfDomainError):
            continue
        if fit.rate < 0 and fit.r_squared >= r2_target:
            return M, fit
    return hi / 2, None


def _cmd_asymptotics(args):
    t0 = time.time()
    pair, _ = io.read_field(args.field)
    ops = args.ops.split(",")
    out = {}
    arrays = []
    csv_rows = []
    grid = pair.grid
    for op in ops:
        if op == "decay":
            if args.slab:
                a, b = (float(x) for x in args.slab.split(","))
            else:
                a, _ = _fit_far_height(pair)
                b = grid.hi[-1]
            fit = farfield.decay_fit(pair, args.p, args.q, (a, b))
            out["decay"] = vars(fit)
            arrays.append(np.asarray([fit.rate, fit.amplitude, fit.r_squared]))
        elif op == "planes":
            lo, hi = grid.lo[-1], grid.hi[-1]
            lams = np.linspace(lo + 0.2 * (hi - lo), hi - 0.2 * (hi - lo),
                               args.n_planes)
            reports = [farfield.moving_plane_check(pair, lam) for lam in lams]
            worst = max(max(r.max_violation_u, r.max_violation_v)
                        for r in reports)
            out["planes"] = {"n_lambda": len(lams), "max_violation": worst}
            csv_rows = [(r.lam, r.max_violation_u, r.max_violation_v,
                         r.coverage) for r in reports]
            arrays.append(np.asarray(csv_rows))
        elif op == "cone":
            M, _ = _fit_far_height(pair)
            dim = grid.dim
            e1 = np.zeros(dim)
            e1[0] = 1.0
            en = np.zeros(dim)
            en[-1] = 1.0
            nus = [en, (e1 + en) / np.sqrt(2), (-e1 + 2 * en) / np.sqrt(5)]
            probes = [farfield.directional_monotonicity(pair, nu, ("upper", M))
                      for nu in nus]
            out["cone"] = {"M": M, "min_derivatives":
                           [p.min_derivative for p in probes]}
            arrays.append(np.asarray([p.min_derivative for p in probes]))
        elif op == "defect":
            d = farfield.one_dimensionality_defect(pair)
            out["defect"] = d
            arrays.append(np.asarray([d]))
        elif op == "levelset":
            ext = farfield.level_set_extent(pair, args.c)
            out["levelset"] = vars(ext)
            arrays.append(np.asarray([ext.min_xN, ext.max_xN,
                                      ext.column_hit_fraction]))
        else:
            raise ConfigError(f"unknown op {op!r}")
    with open(args.out, "w") as fh:
        json.dump(out, fh, indent=2)
    outputs = [args.out]
    if csv_rows and args.planes_csv:
        io.write_csv(args.planes_csv,
                     ["lambda", "violation_u", "violation_v", "coverage"],
                     csv_rows)
        outputs.append(args.planes_csv)
    _manifest(args.out, "asymptotics", vars(args), [args.field], outputs, t0,
              arrays)
    return 0


def _cmd_segregate(args):
    t0 = time.time()
    cfg = _load_config(args.config)
    grid = _grid_from_config(cfg)
    bdry, inputs = _boundary_from_config(cfg, grid)
    betas = [float(p) for p in args.betas.split(",")]
    opts = SolveOptions(tol=float(cfg.get("tol", 1e-9)),
                        max_sweeps=int(cfg.get("max_sweeps", 200000)),
                        omega=cfg.get("omega"))
    table = segregation.sweep(bdry, betas, opts, alpha=args.alpha)
    rows = zip(table.betas, table.sup_uv, table.interaction,
               table.harm_residual, table.holder, table.sweeps)
    io.write_csv(args.out, ["beta", "sup_uv", "interaction", "harm_residual",
                            "holder", "sweeps"], rows)
    _manifest(args.out, "segregate", cfg | {"betas": betas,
                                            "alpha": args.alpha},
              [args.config] + inputs, [args.out], t0,
              [table.betas, table.sup_uv, table.interaction,
               table.harm_residual, table.holder])
    if not table.complete:
        print("warning: sweep incomplete, a solve failed to converge",
              file=sys.stderr)
        return 3
    return 0


def _cmd_verify(args):
    from . import acceptance
    results = acceptance.run_all(quick=args.quick)
    return 0 if all(r.passed for r in results) else 1


def build_parser():
    p = argparse.ArgumentParser(prog="pslab", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="subcommand", required=True)

    s = sub.add_parser("solve1d", help="1D heteroclinic profile")
    s.add_argument("--L", type=float, default=30.0)
    s.add_argument("--n", type=int, default=6001)
    s.add_argument("--slope", type=float, default=1.0)
    s.add_argument("--tol", type=float, default=1e-10)
    s.add_argument("--out", required=True)
    s.set_defaults(fn=_cmd_solve1d)

    s = sub.add_parser("solve2d", help="2D/3D box solve")
    s.add_argument("--config", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(fn=_cmd_solve2d)

    s = sub.add_parser("diagnose", help="frequency/ACF scan at a center")
    s.add_argument("--field", required=True)
    s.add_argument("--center", required=True)
    s.add_argument("--radii", required=True, help="r0:r1:k or comma list")
    s.add_argument("--out", required=True)
    s.set_defaults(fn=_cmd_diagnose)

    s = sub.add_parser("blowdown", help="blow-down distance table")
    s.add_argument("--field", required=True)
    s.add_argument("--center", required=True)
    s.add_argument("--R-list", required=True)
    s.add_argument("--ref-n", type=int, default=129)
    s.add_argument("--out", required=True)
    s.set_defaults(fn=_cmd_blowdown)

    s = sub.add_parser("asymptotics", help="far-field structure probes")
    s.add_argument("--field", required=True)
    s.add_argument("--ops", default="decay,planes,cone,defect,levelset")
    s.add_argument("--out", required=True)
    s.add_argument("--slab", default=None, help="a,b override for decay")
    s.add_argument("--p", type=float, default=1.0)
    s.add_argument("--q", type=float, default=2.0)
    s.add_argument("--c", type=float, default=0.1, help="level-set threshold")
    s.add_argument("--n-planes", type=int, default=25)
    s.add_argument("--planes-csv", default=None)
    s.set_defaults(fn=_cmd_asymptotics)

    s = sub.add_parser("segregate", help="beta sweep with metrics")
    s.add_argument("--config", required=True)
    s.add_argument("--betas", default="1,4,16,64,256")
    s.add_argument("--alpha", type=float, default=0.9)
    s.add_argument("--out", required=True)
    s.set_defaults(fn=_cmd_segregate)

    s = sub.add_parser("verify", help="run the acceptance checks")
    s.add_argument("--quick", action="store_true",
                   help="criteria 1-5 only")
    s.set_defaults(fn=_cmd_verify)
    return p


def run(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except CONFIG_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NUMERIC_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except PslabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
