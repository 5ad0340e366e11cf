"""Numerical laboratory for the first Dirichlet eigenvalue of the p-Laplacian
on radially symmetric domains of warped-product manifolds."""

__version__ = "0.1.0"

from ._backend import BACKEND
from .bounds import (
    BartaProfile,
    BoundReport,
    barta_certificate,
    bound_report,
    capacity_radial,
    cheeger_radial,
    infinity_limit_estimate,
    mazya_upper,
    sinp_barta_profile,
    theorem_lower_bound,
)
from .eigensolver import (
    EigenResult,
    RadialEigenProblem,
    rayleigh_quotient,
    sharpness_upper_bound,
    shoot,
    solve_first_eigenvalue,
)
from .errors import (
    DomainError,
    NumericalError,
    PlapeigError,
    PoleError,
)
from .experiments import (
    SweepRecord,
    run_limit_studies,
    run_sharpness_sweep,
    run_sphere_sweep,
)
from .geometry import (
    Euclidean,
    PaperBump,
    RadialDomain,
    Spherical,
    Tabulated,
    Unit,
    diameter_bounds,
    interval_domain,
    sharpness_radius,
)
from .numerics import Tolerance
from .ptrig import arcsin_p, cos_p, cot_p, pi_p, sin_p, tan_p

__all__ = [name for name in dir() if not name.startswith("_")]
