"""Exact verification of divisor-function q-series identities over partitions."""

from .partitions import (
    CellError,
    Partition,
    StrictPartition,
    adjacent_equal_positions,
    arm_length,
    corner_count,
    enumerate_partitions,
    enumerate_strict_partitions,
    format_partition,
    hook_length,
    parse_partition,
    sigma0,
)
from .qseries import (
    BivariateSeries,
    NonUnitError,
    OrderMismatchError,
    Series,
    SeriesOverflowError,
    evaluate_b_at_one,
    geometric,
    pochhammer,
    q_binomial,
    q_binomial_b,
    reciprocal_unit,
)
from .identities import IdentityReport, IdentitySpec, verify
from .bijections import alpha_k, build_domain, thm41_reduce, verify_pairing

__version__ = "0.1.0"
