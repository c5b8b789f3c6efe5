"""Riemannian geometry of Kahler cones from intersection forms.

Given the symmetric n-linear intersection form of a compact complex
n-fold on a basis of real (1,1)-classes, this package computes the
natural metric of the cone of admissible classes (the Hessian metric of
-log Vol), its Levi-Civita connection, curvature tensor and derived
curvatures, geodesics and completeness probes, and the commutative
algebra the Lefschetz contraction induces at each point.  Every closed
formula is cross-checked by an independent finite-difference oracle.
"""

from .algebra import (
    AlgebraAtPoint,
    BilinearFormSet,
    ConstantCurvatureFit,
    algebra_at,
    kn_product,
)
from .catalog import CATALOG, catalog_names, default_omega, default_point, get_form
from .curvature import (
    CurvatureTensor,
    DerivedCurvatures,
    VectorField,
    christoffel,
    constant_field,
    covariant_derivative,
    derived_curvatures,
    inner22,
    primitive_projection_field,
    riemann,
    riemann_alt,
    riemann_tensor,
    tautological_field,
)
from .errors import (
    DegeneratePlane,
    IndefiniteMetric,
    KConeError,
    LeftCone,
    ManifoldFormatError,
    NonPositiveVolume,
)
from .fdcheck import (
    FDConfig,
    FDReport,
    check_connection,
    check_curvature,
    check_hessian_metric,
    check_lambda_derivative,
    check_primitive_field,
    fd_directional,
    fd_hessian,
    with_fd_jacobian,
)
from .intersection import (
    CohClass,
    IntersectionForm,
    load_manifold,
    parse_manifold,
    serialize_manifold,
)
from .metric import POSDEF_TOL, ConePoint, cone_point
from .paths import (
    GeodesicPath,
    LengthBound,
    ProbeReport,
    PullbackReport,
    SplitReport,
    boundary_probe,
    integrate_geodesic,
    length_bound_check,
    path_length,
    pullback_isometry_check,
    split,
    split_report,
    unsplit,
)
from .verify import run_verification

__version__ = "0.1.0"
