"""relgap: relative perturbation bounds for spectral subspaces.

Weak Sylvester equation solvers with a-priori bounds, sin-theta type
estimates for spectral projections of form-close operators, a Rayleigh-Ritz
a-posteriori subspace error estimator, the square-root perturbation rule,
and a quasi-periodic model-problem benchmark harness.
"""

__version__ = "0.1.0"

from .matcore import (  # noqa: F401
    ConvergenceError,
    HermitianMatrix,
    Norms,
    Projection,
    SpectralDecomposition,
    apply_spectral_fn,
    eig_herm,
    fractional_power,
    hs_norm,
    load_matrix,
    norms,
    op_norm,
    pseudo_inverse,
    save_matrix,
    spectral_projector,
    spectral_projector_below,
    svd,
)
from .forms import (  # noqa: F401
    ClosenessReport,
    FormPair,
    SpectralComparison,
    epsilon_two_sided,
    eta_exact,
    eta_from_epsilon,
    s_operator,
    spectral_comparison,
)
from .sylvester import (  # noqa: F401
    SylvesterBounds,
    WeakSylvesterProblem,
    relative_gap,
    solve_weak_quadrature,
    solve_weak_spectral,
    sylvester_bounds,
    weak_residual,
)
from .subspace import (  # noqa: F401
    BlockCompression,
    BoundReport,
    HsSubspaceBounds,
    ProjectionPairReport,
    block_compress,
    hs_subspace_bounds,
    pair_analysis,
    subspace_bounds,
)
from .ritz import (  # noqa: F401
    RitzEstimate,
    build_hp,
    dk_residual_bound,
    eta_routes,
    eta_spectrum,
    ritz_bounds,
    single_vector_bound,
)
from .sqroot import (  # noqa: F401
    SqrtIntegralResult,
    SqrtPerturbation,
    sqrt_form_bound,
    sqrt_integral_solution,
    sqrt_pair,
)
from .harness import (  # noqa: F401
    BenchmarkRow,
    MathieuModel,
    TruncationWarning,
    build_test_space,
    mathieu_model,
    rows_to_csv,
    rows_to_markdown,
    run_benchmark,
)
