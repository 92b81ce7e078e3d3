"""Quasi-Monte Carlo integration on multiset unions of Korobov p-sets.

Point generation in exact rational arithmetic, weighted-norm Fourier models,
brute-force verification of the exponential-sum bounds behind the worst-case
error certificate, and adversarial fooling functions realizing the matching
lower bound.
"""

from .adversary import (
    CertificateCheck,
    FoolingCertificate,
    FoolingIndexSet,
    build_index_set,
    counting_sum_max,
    fooling_certificate,
    nullspace_vector,
    verify_certificate,
)
from .errors import DataError, DomainError, InvariantViolation
from .expsums import (
    BoundReport,
    ExpSumResult,
    corollary_bound,
    decomposition_check,
    divisor_count,
    expsum_many,
    expsum_single,
    expsum_union,
    expsum_union_many,
    lemma_bound,
    root_count,
)
from .fourier import (
    Frequency,
    SpectralFunction,
    WeightScheme,
    evaluate,
    integral,
    norm,
    random_function,
    weight,
    width,
)
from .integrator import (
    ErrorCertificate,
    LinearAlgorithm,
    PlanResult,
    exact_error,
    plan,
    qmc_apply,
    smallest_admissible_m,
    wc_bound,
)
from .points import (
    KorobovSet,
    RationalPoint,
    SetKind,
    UnionKind,
    UnionPointSet,
    s_set,
    t_set,
    union_set,
)
from .primes import (
    DEFAULT_CONSTANTS,
    DensityConstants,
    PrimeWindow,
    calibrate_constants,
    density_ratio,
    enumerate_window,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_CONSTANTS",
    "BoundReport",
    "CertificateCheck",
    "DataError",
    "DensityConstants",
    "DomainError",
    "ErrorCertificate",
    "ExpSumResult",
    "FoolingCertificate",
    "FoolingIndexSet",
    "Frequency",
    "InvariantViolation",
    "KorobovSet",
    "LinearAlgorithm",
    "PlanResult",
    "PrimeWindow",
    "RationalPoint",
    "SetKind",
    "SpectralFunction",
    "UnionKind",
    "UnionPointSet",
    "WeightScheme",
    "build_index_set",
    "calibrate_constants",
    "corollary_bound",
    "counting_sum_max",
    "decomposition_check",
    "density_ratio",
    "divisor_count",
    "enumerate_window",
    "evaluate",
    "exact_error",
    "expsum_many",
    "expsum_single",
    "expsum_union",
    "expsum_union_many",
    "fooling_certificate",
    "integral",
    "lemma_bound",
    "norm",
    "nullspace_vector",
    "plan",
    "qmc_apply",
    "random_function",
    "root_count",
    "s_set",
    "smallest_admissible_m",
    "t_set",
    "union_set",
    "verify_certificate",
    "wc_bound",
    "weight",
    "width",
]
