"""Field-file persistence (PSLAB-FIELD v1), CSV reports, and run
manifests with determinism fingerprints.

Fields are stored as a single JSON document; floats serialize via repr
so numeric arrays round-trip bit-exactly.
"""

import csv
import hashlib
import json
import warnings

import numpy as np

from .errors import ConfigError
from .grid import GridSpec, ScalarField, SolutionPair

FIELD_VERSION = "PSLAB-FIELD v1"


def write_field(path, pair: SolutionPair, extra=None):
    """Write a pair as a PSLAB-FIELD v1 JSON document."""
    g = pair.grid
    doc = {
        "version": FIELD_VERSION,
        "dim": g.dim,
        "n": list(g.n),
        "lo": list(g.lo),
        "hi": list(g.hi),
        "beta": pair.beta,
        "u": pair.u.values.ravel().tolist(),
        "v": pair.v.values.ravel().tolist(),
    }
    if extra:
        for k, val in extra.items():
            if k in doc:
                raise ConfigError(f"extra key {k!r} collides with a format key")
            doc[k] = val
    with open(path, "w") as fh:
        json.dump(doc, fh)
    return path


def read_field(path):
    """Read a PSLAB-FIELD v1 file; returns (SolutionPair, metadata)."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: malformed JSON at line {exc.lineno} "
                          f"column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top level must be an object")
    if doc.get("version") != FIELD_VERSION:
        raise ConfigError(f"{path}: unknown version {doc.get('version')!r}, "
                          f"expected {FIELD_VERSION!r}")
    for key in ("dim", "n", "lo", "hi", "u", "v"):
        if key not in doc:
            raise ConfigError(f"{path}: missing key {key!r}")
    n = tuple(int(a) for a in doc["n"])
    if len(n) != int(doc["dim"]):
        raise ConfigError(f"{path}: n has {len(n)} entries for dim {doc['dim']}")
    size = int(np.prod(n))
    u = np.asarray(doc["u"], dtype=float)
    v = np.asarray(doc["v"], dtype=float)
    if u.size != size or v.size != size:
        raise ConfigError(
            f"{path}: u/v lengths ({u.size}, {v.size}) do not match grid "
            f"size {size}")
    if "beta" in doc:
        beta = float(doc["beta"])
    else:
        warnings.warn(f"{path}: beta missing, defaulting to 1")
        beta = 1.0
    try:
        grid = GridSpec(tuple(doc["lo"]), tuple(doc["hi"]), n)
        pair = SolutionPair(ScalarField(grid, u.reshape(n)),
                            ScalarField(grid, v.reshape(n)), beta=beta)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    meta = {k: doc[k] for k in doc
            if k not in ("version", "dim", "n", "lo", "hi", "beta", "u", "v")}
    return pair, meta


def fingerprint(arrays):
    """sha256 over the raw bytes of the arrays, in order; identical
    inputs give identical digests on any machine with IEEE doubles."""
    dig = hashlib.sha256()
    for a in arrays:
        a = np.ascontiguousarray(np.asarray(a, dtype=float))
        dig.update(str(a.shape).encode())
        dig.update(a.tobytes())
    return dig.hexdigest()


def file_digest(path):
    dig = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            dig.update(chunk)
    return dig.hexdigest()


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow(list(row))
    return path


def write_manifest(path, *, version, subcommand, config, inputs, outputs,
                   wall_time, arrays):
    """Run manifest tying outputs to exact inputs; `arrays` feed the
    determinism fingerprint."""
    doc = {
        "tool_version": version,
        "subcommand": subcommand,
        "config": config,
        "input_digests": {p: file_digest(p) for p in inputs},
        "outputs": list(outputs),
        "wall_time_s": wall_time,
        "determinism_fingerprint": fingerprint(arrays),
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)
    return doc
