"""Numerical laboratory for the phase-separation system
-lap u = u v^2, -lap v = u^2 v on 1D/2D/3D boxes: solvers plus the
frequency, product-monotonicity, far-field and segregation diagnostics.
"""

__version__ = "1.0.0"

from .errors import (ConfigError, DegenerateCenterError, DivergenceError,
                     InsufficientDataError, MisuseError, NonConvergenceError,
                     OutOfDomainError, PslabError, StructureError,
                     UnsupportedConfigurationError)
from .grid import GridSpec, ScalarField, SolutionPair, gradient_fields, \
    interpolate, laplacian
from .quadrature import PairSampler, SphereQuadrature, default_quadrature
from .profile1d import Profile1D, center_and_symmetry_defect, \
    energy_invariant, rescale_profile, solve_heteroclinic
from .solver import BoundaryData, SolveOptions, SolveResult, \
    boundary_from_harmonic, boundary_from_profile, lift_profile, residual, \
    solve
from .almgren import BlowdownReport, GammaConstant, MonotonicityReport, \
    Verdict, acf_scan, almgren_scan, blow_down, check_doubling, \
    gamma_constant, growth_exponent, linear_pair, spherical_rayleigh
from .farfield import ConeProbe, DecayFit, LevelSetExtent, MovingPlaneReport, \
    cosh_decay_oracle, cosh_decay_rate, decay_fit, directional_monotonicity, \
    level_set_extent, moving_plane_check, one_dimensionality_defect, \
    strip_bound_scan
from .segregation import SegregationTable, holder_quotient, interface_width, \
    sweep
from .io import read_field, write_field
from .kernels import BACKEND as KERNEL_BACKEND
