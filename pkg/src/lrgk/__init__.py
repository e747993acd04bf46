"""Randomized low-rank approximation of Laplacian-based graph kernels.

Build node embeddings whose Gram matrix approximates a graph kernel
h(L): estimate the K-th eigenvalue, filter Gaussian probes with a
Jackson-damped low-pass polynomial, orthogonalize, then filter by an
expansion of h^{1/2}.  A dense eigendecomposition oracle validates the
error bounds at small N.
"""

from .embedding import (
    Embedding,
    RandomProbe,
    approximate_kernel,
    compute_embedding,
    kernel_matvec,
    load_embedding,
    ortho,
    range_find,
    save_embedding,
)
from .errors import (
    AssumptionViolated,
    DimensionMismatch,
    Disconnected,
    DuplicateEdge,
    EmptySweep,
    GraphFormatError,
    InvalidEdge,
    InvalidParams,
    InvalidWeight,
    IsolatedNode,
    KOutOfRange,
    LrgkError,
    NonFiniteSample,
    NumericError,
    ParameterOutOfDomain,
    RankDeficient,
    TooLarge,
    ValidationError,
)
from .estimation import EstimationConfig, estimate_eigenvalue_count, estimate_lambda_k
from .filters import (
    ChebyshevFilter,
    KernelFunction,
    apply_filter,
    chebyshev_coefficients,
    eval_kernel_function,
    indicator_filter,
    jackson_damping,
    kernel_sqrt_filter,
)
from .generators import GeneratorSpec, generate
from .graph import (
    Graph,
    LaplacianOperator,
    build_normalized_laplacian,
    laplacian_matvec,
    load_graph,
    save_graph,
)
from .oracle import (
    DiagnosticsReport,
    EigenSystem,
    best_rank_k,
    dense_eigendecomposition,
    diagnose,
    epsilon_diagnostics,
    exact_kernel,
    mc_gaussian_pseudoinverse,
    measured_errors,
    kernel_error_bounds,
    relative_spectral_error,
)

__version__ = "0.1.0"
