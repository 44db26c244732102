"""Incremental ridge solutions for broad learning networks on added inputs.

The output weights are kept equal to the ridge solution
``inv(A^T A + lam I) A^T Y`` as rows are appended to ``A``.  The solvers
update either the inverse ``Q`` of the k x k matrix ``A^T A + lam I``
(:func:`update_recursive`) or an upper-triangular inverse Cholesky factor
``F`` with ``F F^T = Q`` (:func:`update_sqrt`).  Neither forms the k x l
ridge inverse.
"""

from .errors import (
    BadMagic,
    ConfigError,
    CountMismatch,
    DataError,
    DimensionMismatch,
    NotPositiveDefinite,
    NumericalBreakdown,
    ParseError,
    RaggedRows,
    ScheduleExceedsData,
    SingularTriangular,
    TruncatedFile,
)
from .flops import FlopInputs, crossover_cheaper, flops_existing, flops_recursive, flops_sqrt
from .incremental import (
    BaselineState,
    Branch,
    IncrementBatch,
    init_baseline_state,
    ridge_gain,
    select_branch,
    update_generalized_existing,
    update_recursive,
    update_sqrt,
)
from .linalg import (
    cholesky_lower,
    inverse_cholesky_upper,
    invert_upper_triangular,
    spd_inverse,
    upper_cholesky_of,
)
from .network import (
    NetworkConfig,
    NetworkParams,
    build_expanded,
    enhance,
    gen_params,
    incremental_expanded,
    map_features,
)
from .ridge import (
    RecursiveState,
    SqrtState,
    assemble_partitioned_ridge_inverse,
    init_recursive_state,
    init_sqrt_state,
    ridge_inverse,
    standard_ridge_solution,
)

__version__ = "0.1.0"
