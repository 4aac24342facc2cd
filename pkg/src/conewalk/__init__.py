"""Exact discrete harmonic polynomials and exit-time characteristics for
two-dimensional lattice random walks killed at leaving a wedge.

The package builds, by constructive linear algebra over exact scalar
fields, the positive harmonic polynomial of a normalized walk in a wedge
of opening pi/m, the polynomials giving exact moments of the exit time,
and an independent trigonometric-series construction of the same objects.
A Monte Carlo simulator cross-checks every exact quantity.
"""

from .alt import (
    FourierProfile,
    build_harmonic_alt,
    eliminate_monomial,
    fourier_profile,
    harmonic_correction,
    particular_solution,
    polar_mode,
    trig_series,
)
from .cones import ConeSpec, VERTICAL, cone_from_slope, detect_integer_m, make_cone
from .diagnostics import PropertyResult, self_test
from .drift import DriftExpansion, drift_expansion, one_step_residual
from .errors import (
    AngleNotRepresentable,
    AngleOutOfRange,
    BoundaryPointError,
    ConewalkError,
    DegenerateCorrelation,
    DegreeTooHigh,
    InsufficientMoments,
    InsufficientSurvivors,
    InternalError,
    MomentCheckInvalid,
    MomentNotFinite,
    ResonantDegree,
    SingularAngle,
    StartNotInterior,
    ValidationError,
)
from .exits import (
    ExitPositionMoments,
    MomentPolyResult,
    exit_position_moments,
    first_moment_poly,
    poisson_solve,
    tau_moment_poly,
)
from .harmonic import (
    AngleClassification,
    HarmonicResult,
    check_low_degree_uniqueness,
    construct_harmonic,
    converse_angle_test,
    vanishes_on_boundary,
)
from .linsys import (
    BoundaryMatrix,
    OddTriangularization,
    build_matrix,
    kernel_dimension,
    pivot_identity_residual,
    solve_system,
    solve_system_recursive,
    triangularize_odd,
)
from .poly import Poly, boundary_distance, boundary_ratio, im_power, laplacian, re_power
from .scalars import (
    Backend,
    FloatBackend,
    QuadElement,
    QuadraticBackend,
    RATIONAL,
    RationalBackend,
    backend_from_name,
    backend_of,
    bigfloat,
    format_scalar,
    quadratic,
    scalar_to_float,
    sqrt_fraction,
)
from .sim import (
    CheckResult,
    SimConfig,
    SimReport,
    sample_exit,
    tail_exponent,
)
from .walks import (
    MomentTable,
    TransformInfo,
    WalkSpec,
    build_transform,
    builtin_walks,
    check_no_overshoot,
    cone_for_walk,
    diagonal_walk,
    push_moments,
    simple_walk,
    skewed_walk,
)

__version__ = "0.1.0"
