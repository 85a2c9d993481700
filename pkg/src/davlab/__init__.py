"""Exact workbench for weighted zero-sum problems.

Covers weighted subsequence sums over Z_n and products of cyclic groups
(reachable-sum folds, certificates, exact Davenport constants with
closed-form brackets) plus product-one-free sequences in the semidirect
products C_n : C_2.
"""

from .bounds import (
    BoundsRow,
    MultidimBounds,
    construct_witness_1,
    construct_witness_2,
    floor_log2,
    lower_bound,
    multidim_bounds,
    table_row,
    upper_bound,
)
from .davenport import (
    ExactResult,
    SandwichReport,
    SearchBudget,
    enumerate_extremal,
    exact_davenport,
    exact_davenport_k,
    verify_sandwich,
    zero_sum_free_sequences,
)
from .errors import (
    BoundViolationError,
    BudgetExceededError,
    DavlabError,
    HypothesisNotMetError,
    InvalidSError,
    NoValidSplitError,
    TooLargeError,
    WrongLengthError,
)
from .metacyclic import (
    IDENTITY,
    ClassificationReport,
    GroupSpec,
    GSequence,
    MetaElem,
    OrderedCertificate,
    claimed_extremal_sequence,
    classify_extremal,
    format_element,
    format_sequence,
    has_product_one_subsequence,
    inverse,
    is_claimed_extremal_form,
    mul,
    pairing_identity_check,
    small_davenport,
)
from .modring import (
    CrtSplit,
    WeightSet,
    crt_split,
    distinct_prime_factors,
    divisors,
    involutions,
    is_squarefree,
    psi,
    psi_inv,
    quadratic_residue_weights,
    units,
)
from .zsfree import (
    BRUTE_FORCE_CAP,
    Certificate,
    ReachableSet,
    ZSequence,
    brute_force_oracle,
    extract_certificate,
    has_weighted_zero_sum,
    reachable_sums,
)

__version__ = "0.1.0"

__all__ = [
    "BoundsRow",
    "BoundViolationError",
    "BRUTE_FORCE_CAP",
    "BudgetExceededError",
    "Certificate",
    "ClassificationReport",
    "claimed_extremal_sequence",
    "classify_extremal",
    "construct_witness_1",
    "construct_witness_2",
    "crt_split",
    "CrtSplit",
    "DavlabError",
    "distinct_prime_factors",
    "divisors",
    "enumerate_extremal",
    "exact_davenport",
    "exact_davenport_k",
    "ExactResult",
    "extract_certificate",
    "floor_log2",
    "format_element",
    "format_sequence",
    "GroupSpec",
    "GSequence",
    "has_product_one_subsequence",
    "has_weighted_zero_sum",
    "HypothesisNotMetError",
    "IDENTITY",
    "inverse",
    "InvalidSError",
    "involutions",
    "is_claimed_extremal_form",
    "is_squarefree",
    "lower_bound",
    "MetaElem",
    "mul",
    "multidim_bounds",
    "MultidimBounds",
    "NoValidSplitError",
    "OrderedCertificate",
    "pairing_identity_check",
    "psi",
    "psi_inv",
    "quadratic_residue_weights",
    "ReachableSet",
    "reachable_sums",
    "SandwichReport",
    "SearchBudget",
    "small_davenport",
    "table_row",
    "TooLargeError",
    "units",
    "upper_bound",
    "verify_sandwich",
    "WeightSet",
    "WrongLengthError",
    "zero_sum_free_sequences",
    "ZSequence",
]
