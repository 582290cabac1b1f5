"""Optimistic online optimization and zero-sum game solvers on Riemannian
manifolds, with concrete geometries, numerical oracles, and a benchmark CLI.
"""

from .geometry import (
    CurvatureBounds,
    FrechetMeanError,
    GeometryError,
    GeometryParams,
    Manifold,
    Point,
    TangentVector,
    frechet_mean,
    sigma_constant,
    weighted_frechet_mean,
    zeta_constant,
)
from .manifolds import SPD, Euclidean, Hyperbolic, Product, Sphere, make_manifold
from .online import (
    CorrectedState,
    MetaWeights,
    OptimisticState,
    RegretLedger,
    StepSizePool,
    aoogd_configure,
    aoogd_round,
    regret_update,
    rogd_step,
    roogd_corrected_init,
    roogd_corrected_step,
    roogd_init,
    roogd_step,
)
from .games import (
    GameState,
    NEDiagnostics,
    ZeroSumGame,
    geodesic_average,
    make_spd_dataset,
    ne_diagnostics,
    quad_duality_gap,
    quad_logdet_game,
    rceg_step,
    rgda_step,
    robust_pca_game,
    rogda_init,
    rogda_step,
)
from .verify import (
    BlowupTrace,
    ProbeReport,
    correction_blowup_trace,
    fd_gradient_check,
    holonomy_probe,
    random_small_rectangle,
    triangle_comparison_suite,
)
from .streams import FrechetMeanLoss, child_rng, fixed_probe_points, gen_frechet_stream
from .bench import (
    AlgorithmSpec,
    BenchResult,
    ConfigError,
    ExperimentConfig,
    ResultRow,
    run_experiment,
    run_verification,
    sweep,
)

__version__ = "0.1.0"
