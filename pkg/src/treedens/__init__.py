"""Tree-based estimation of discrete monotone and convex densities.

A lab for piecewise-constant and piecewise-linear density estimates built
on adaptively grown partition trees, with the supporting cast: exact shape
predicates, seeded sampling, TV and affinity metrics, minimax rate curves,
hypercube lower-bound constructions, minimum-distance selection, and a
Monte Carlo risk harness.  The treedens CLI exposes the same operations.
"""

from .densities import (
    FAMILY_NAMES,
    HARMONIC_ZIPF,
    LINEAR_DECREASING,
    NORMALIZATION_TOL,
    TRUNC_GEOMETRIC,
    UNIFORM,
    DiscreteDensity,
    density_from_csv,
    density_from_json,
    family,
    is_convex_non_increasing,
    is_non_increasing,
    make_density,
)
from .errors import (
    BadParam,
    BadParams,
    DegenerateGrid,
    DomainMismatch,
    EmptyCandidates,
    EmptyFamily,
    InfeasibleSpec,
    NegativeMass,
    NotConvex,
    NotMonotone,
    NotNormalized,
    NotPiecewiseConstant,
    OutOfRange,
    OutOfRegime,
    TooLarge,
    TreedensError,
    UnknownEstimator,
)
from .hypercubes import (
    HypercubeSpec,
    Regime,
    assouad_alpha_beta,
    assouad_default_params,
    assouad_density,
    hypercube_bins,
)
from .mde import CandidateSet, minimum_distance_estimate, yatracos_class
from .metrics import (
    RateBranch,
    RateRegime,
    assouad_lower_bound,
    hellinger_affinity,
    rate_convex,
    rate_monotone,
    tv,
    tv_sup_bruteforce,
    vc_unions_intervals_brute,
)
from .partition_trees import (
    PartitionTree,
    Piece,
    PiecewiseEstimate,
    TreeNode,
    build_greedy_binary,
    build_greedy_ternary,
    build_idealized_binary,
    build_idealized_ternary,
    greedy_pl_estimate,
    greedy_split_decision,
    greedy_ternary_split_decision,
    histogram_estimate,
    idealized_pc_estimate,
    idealized_pl_estimate,
    monotonize,
    pad_to_power,
)
from .risk_lab import (
    ESTIMATORS,
    RateScalingResult,
    RiskReport,
    default_sup_family,
    estimator_names,
    fit_estimate,
    mc_risk,
    rate_scaling,
    sup_risk,
)
from .sampling import (
    SampleCounts,
    derive_seed,
    empirical_sup_deviation,
    interval_count,
    sample,
    subsets_to_masks,
)

__version__ = "0.1.0"
