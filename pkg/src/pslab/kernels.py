"""Backend selection for the relaxation kernels.

Prefers the compiled extension, falls back to the numpy implementation.
Set PSLAB_FORCE_PYTHON=1 to force the fallback (used by the benchmark and
the backend-equivalence tests).  Both backends are bit-identical.
"""

import os

if os.environ.get("PSLAB_FORCE_PYTHON", "").lower() not in ("", "0", "false"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        from . import _kernels_py as _impl

BACKEND = _impl.BACKEND


def relax(a, b, beta, h2, omega):
    """One red-black SOR pass for -lap a + beta a b^2 = 0, in place."""
    if a.ndim == 2:
        _impl.relax_2d(a, b, beta, h2, omega)
    elif a.ndim == 3:
        _impl.relax_3d(a, b, beta, h2, omega)
    else:
        raise ValueError("relax supports 2D and 3D arrays only")


def residual_eq(a, b, beta, h2):
    """Max interior |lap_h a - beta a b^2|."""
    if a.ndim == 2:
        return _impl.residual_2d(a, b, beta, h2)
    if a.ndim == 3:
        return _impl.residual_3d(a, b, beta, h2)
    raise ValueError("residual_eq supports 2D and 3D arrays only")
