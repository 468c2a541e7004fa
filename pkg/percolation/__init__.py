"""2-соседняя бутстрап-перколяция на графах Хэмминга K_k^□n.

Движки замыкания, калькулятор оценок порога, переборный эталон и Монте-Карло.
"""

__version__ = "0.1.0"

from .errors import (
    BracketFailure,
    CapabilityError,
    DiagnosticError,
    InputDomainError,
    PercolationError,
    PreconditionError,
    WitnessNotFoundError,
)
from .numbers import BigCount, LogNumber
from .hamming import HammingSpace, InfectionConfig, make_rng, sample_infected
from .projection import Projection, merge_span, projection_distance
from .engine import (
    SpanSequence,
    closure_components,
    closure_queue,
    extend_candidates,
    is_sequentially_spanning,
    percolates,
    witnessing_quadruple,
)
from .bounds import (
    AdmissibleIndex,
    admissible_indices,
    count_quadruples,
    lower_bound_report,
    parameters,
    second_moment_report,
    seq_count,
)
from .oracle import (
    check_vdbk,
    enumerate_quadruples,
    enumerate_spanning_sequences,
    exact_percolation_polynomial,
)
from .montecarlo import estimate_percolation, find_pc, sweep
from .config import RunConfig, Settings, get_settings

__all__ = [
    "__version__",
    "PercolationError",
    "InputDomainError",
    "PreconditionError",
    "WitnessNotFoundError",
    "CapabilityError",
    "DiagnosticError",
    "BracketFailure",
    "BigCount",
    "LogNumber",
    "HammingSpace",
    "InfectionConfig",
    "make_rng",
    "sample_infected",
    "Projection",
    "merge_span",
    "projection_distance",
    "SpanSequence",
    "closure_queue",
    "closure_components",
    "percolates",
    "is_sequentially_spanning",
    "extend_candidates",
    "witnessing_quadruple",
    "AdmissibleIndex",
    "admissible_indices",
    "count_quadruples",
    "parameters",
    "lower_bound_report",
    "second_moment_report",
    "seq_count",
    "exact_percolation_polynomial",
    "enumerate_spanning_sequences",
    "enumerate_quadruples",
    "check_vdbk",
    "estimate_percolation",
    "find_pc",
    "sweep",
    "RunConfig",
    "Settings",
    "get_settings",
]
