"""Integral points on curves over number fields and Hilbert specializations
with prescribed Frobenius, at desk scale and with exact arithmetic."""

from .errors import *  # noqa: F401,F403
from .numfield import AlgInt, NumberField, abs_norm, enumerate_box, house
from .polyring import BiPoly, UniPoly, alg_roots, disc_y, parse_poly, poly_height, resultant_bivar
from .modp import CycleType, PrimeIdeal, factor_pattern, split_prime, totally_split_primes
from .specfrob import (
    Certificate, FieldFingerprint, RegularModel, SpecializationRecord, c2_model, certify_group,
    fingerprint, frobenius_pattern, s3_model, specialize,
)
from .hilbert import FrobeniusData, base_primes, crt_assemble, hilbert_enumerate, tau_cosets
from .pointcount import (
    count_points, count_points_naive, count_specialization_points, cor_c_shift, detmethod_cover,
    fit_slope, hensel_series, theorem_c_rhs,
)
from .malle import count_fields, delta_default, distinct_ratio, grunwald_search, height_budget

__version__ = "0.1.0"
