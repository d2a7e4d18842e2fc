"""Spatial Gibbs random graphs on an integer segment.

Sampling (reference measure and Metropolis chains for the Gibbs measure),
exact enumeration for small ``n``, hierarchical layer constructions, local
neighbourhood statistics and the closed-form scaling exponents.
"""

__version__ = "0.1.0"

from .graph import SegmentGraph, all_pairs_distances, distance, h_p
from .measures import (
    ModelParams,
    chain_rng,
    edge_prob,
    init_chain,
    iter_chain,
    log_gibbs_weight_unnormalized,
    log_reference_weight,
    mcmc_step,
    run_chain,
    sample_reference,
    subgraph_log_prob,
)
from .exact import enumerate_measure, exact_event_probability, exact_expectation, total_variation
from .hierarchy import Critical, SubCritical, SuperCritical, g_star, layer, layer_spacings, verify_scaling
from .local import (
    NeighborhoodQuery,
    RootedPattern,
    ball,
    empirical_fraction,
    is_isomorphic,
    long_edge_count,
    mu_truncated,
    pattern_census,
    translate,
)
from .theory import alpha_star, in_exceptional_set, local_limit_assumption_holds, theory_table
