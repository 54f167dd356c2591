"""Global minimisation of univariate polynomials by heat evolution.

The polynomial is smoothed under the heat equation until it is convex, its
unique minimiser is found, and the minimiser is tracked back to the original
polynomial along the trajectory ODE ``dx/dt = -p_xxx / (2 p_xx)``.
Fingerprints and confinement zones tell when that tracking succeeds.
"""

from .errors import ConsistencyViolation, DomainError, NonConvergence, PolySyntaxError, YPFlowError
from .fingerprint import common_zeros, fingerprint, fp1_merge_points, fp2_fp3_intersections
from .flow import attainability, backward_flow_minimize, classify_zones, integrate_yp
from .heat import convexification_time, evolve_at, evolve_symbolic, steklov
from .oracle import brute_force_min, verify_method
from .parse import format_poly, parse, parse_coeffs
from .polynomial import Polynomial, TPoly, real_roots, resultant_in_t, solve_cubic, sturm_count

__version__ = "0.1.0"

__all__ = [
    "ConsistencyViolation",
    "DomainError",
    "NonConvergence",
    "PolySyntaxError",
    "YPFlowError",
    "Polynomial",
    "TPoly",
    "attainability",
    "backward_flow_minimize",
    "brute_force_min",
    "classify_zones",
    "common_zeros",
    "convexification_time",
    "evolve_at",
    "evolve_symbolic",
    "fingerprint",
    "format_poly",
    "fp1_merge_points",
    "fp2_fp3_intersections",
    "integrate_yp",
    "parse",
    "parse_coeffs",
    "real_roots",
    "resultant_in_t",
    "solve_cubic",
    "steklov",
    "sturm_count",
    "verify_method",
]
