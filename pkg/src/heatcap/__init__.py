"""heatcap: numerical verification of Neumann heat-kernel gradient estimates,
Harnack inequalities, on-diagonal kernel bounds, heat-trace sandwiches and
eigenvalue lower bounds against exactly computable spectra of rotationally
symmetric model manifolds with convex boundary and positive Ricci curvature.
"""

from .tridiag import BACKEND as solver_backend
from .geometry import (
    GeometryReport,
    WarpedProductModel,
    comparison_volume,
    comparison_volume_inverse,
    curvature_report,
    geodesic_distance,
    make_round_cap,
    make_warped,
)
from .spectral import (
    RadialMode,
    SpectrumTable,
    angular_multiplicity,
    apply_semigroup_radial,
    assemble_spectrum,
    heat_kernel,
    heat_trace,
    solve_radial_modes,
)
from .bounds import (
    BoundInputs,
    LiYauCoeffs,
    asymptotics,
    eigen_lower_bounds,
    harnack_factor,
    liyau_coeffs,
    ondiag_bounds,
    refined_upper,
    trace_bounds,
    volume_bounds,
)
from .verify import CheckResult, VerificationReport, run_suite
from .config import RunConfig, parse_config

__version__ = "0.1.0"
