"""Point counts, CM newform coefficients and L-function bookkeeping for the
cuboid surface a_i^2 + b_i^2 = c^2, a_1^2 + a_2^2 + a_3^2 = c^2 in P^6."""

from .cmforms import (EXCLUDED, CoeffPair, FormId, GaussianInt, a2b2_decomp, ap,
                      ap_oracle_elliptic, coefficient, eta_oracle_h16, extract_g_pair,
                      qexp, two_squares_normalized)
from .counting import (CountRecord, VarietyId, count_curve_X, count_elliptic,
                       count_singular, count_surface_brute, count_surface_fast,
                       model_resolved_count, singular_points)
from .ffield import (PrimeContext, QuadraticCharacter, build_quadratic_extension,
                     character_value, legendre, prime_context, sqrt_count)
from .lfunc import (EulerFactor, LSpec, PRESETS, aggregate_factor, dirichlet_coeffs,
                    euler_factor, evaluate_partial, export_table)
from .store import CacheKey, Store
from .tracefit import (PAPER_MULTIPLICITIES, FitReport, MultiplicityVector,
                       fit_multiplicities, picard_report, trace_rhs, verify_identity)

__version__ = "0.1.0"
