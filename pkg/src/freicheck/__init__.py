"""Randomized verification of matrix products over exact rings.

The deterministic way to check a claimed product C = AB is to recompute AB in
Theta(n^3) time.  This package implements the quadratic alternative: compare
A(Br) with Cr for random vectors r, which never wrongly rejects and wrongly
accepts one iteration with probability at most the largest point mass of the
component distribution.  Alongside the verifier it ships exact and empirical
false-accept analysis, a seeded instance generator, a plain-text matrix
format, and a benchmark runner, all exposed through the ``freicheck`` CLI.
"""

from .analysis import (
    DEFAULT_BUDGET,
    MODES,
    RANK_LIMIT,
    DifferenceProfile,
    EmpiricalRate,
    ErrorReport,
    InstanceSpec,
    analyze_instance,
    difference_profile,
    empirical_false_accept_rate,
    exact_false_accept_probability,
    generate_instance,
    wilson_interval,
)
from .bench import BenchRecord, doubling_ratios, run_bench, write_csv
from .errors import (
    BudgetExceeded,
    ConfigInvalid,
    DimensionMismatch,
    DuplicateSupport,
    FormatError,
    FreicheckError,
    GenerationFailed,
    IndexOutOfRange,
    InstanceActuallyEqual,
    IntegerOverflow,
    InvalidDistribution,
    InvalidEntry,
    InvalidProbability,
    InvalidRing,
    RingMismatch,
    SupportTooSmall,
)
from .matio import format_matrix, parse_matrix, read_matrix, write_matrix
from .matrix import (
    Matrix,
    RingSpec,
    Vector,
    column,
    identity,
    mat_add,
    mat_sub,
    mat_vec,
    matmul,
    mats_equal,
    outer,
    parse_ring,
    reset_scalar_multiplies,
    scalar_multiplies,
)
from .sampling import (
    DiscreteDistribution,
    SeededRng,
    bernoulli,
    field_uniform,
    p_max,
    parse_dist,
    sample_vector,
    stream_seed,
    substream,
    uniform_binary,
    uniform_support,
)
from .verify import Verdict, VerifyConfig, freivalds_iteration, verify

__version__ = "0.1.0"

__all__ = [
    "BenchRecord",
    "BudgetExceeded",
    "ConfigInvalid",
    "DEFAULT_BUDGET",
    "DifferenceProfile",
    "DimensionMismatch",
    "DiscreteDistribution",
    "DuplicateSupport",
    "EmpiricalRate",
    "ErrorReport",
    "FormatError",
    "FreicheckError",
    "GenerationFailed",
    "IndexOutOfRange",
    "InstanceActuallyEqual",
    "InstanceSpec",
    "IntegerOverflow",
    "InvalidDistribution",
    "InvalidEntry",
    "InvalidProbability",
    "InvalidRing",
    "MODES",
    "Matrix",
    "RANK_LIMIT",
    "RingMismatch",
    "RingSpec",
    "SeededRng",
    "SupportTooSmall",
    "Vector",
    "Verdict",
    "VerifyConfig",
    "analyze_instance",
    "bernoulli",
    "column",
    "difference_profile",
    "doubling_ratios",
    "empirical_false_accept_rate",
    "exact_false_accept_probability",
    "field_uniform",
    "format_matrix",
    "freivalds_iteration",
    "generate_instance",
    "identity",
    "mat_add",
    "mat_sub",
    "mat_vec",
    "matmul",
    "mats_equal",
    "outer",
    "p_max",
    "parse_dist",
    "parse_matrix",
    "parse_ring",
    "read_matrix",
    "reset_scalar_multiplies",
    "run_bench",
    "sample_vector",
    "scalar_multiplies",
    "stream_seed",
    "substream",
    "uniform_binary",
    "uniform_support",
    "verify",
    "wilson_interval",
    "write_csv",
    "write_matrix",
]
