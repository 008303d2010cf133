"""Occupancy measures, divergence thresholds, sample-size formulas and simplex
geometry for policy-space compression studies. Thin wrapper over the C++ core."""

from ._core import (
    BudgetPair,
    CandidateSet,
    ClosedFormTv,
    Cmp,
    CompressionResult,
    CoverCheck,
    EstimatedModel,
    GeometryCertificate,
    OccupancyMeasure,
    OccupancySample,
    RenyiUnknownBudgets,
    SampleBudget,
    SimplexPoint,
    SpectralInfo,
    TabularPolicy,
    ThresholdReport,
    TvExtrema,
    WeightDiagnostics,
    certificate,
    chain_concentration_bound,
    chain_concentration_budget,
    closed_form_tv,
    divergence_matrix,
    estimate_transition_model,
    exact_return,
    generate_random_mdp,
    greedy_cover,
    max_tv_family,
    loosest_tv_family,
    min_tv_family,
    load_cmp,
    load_policy,
    make_random,
    make_uniform,
    make_vertex,
    mc_return,
    occupancy,
    occupancy_on_estimate,
    occupancy_oracle,
    renyi2,
    renyi_known_bounds,
    renyi_unknown_bounds,
    sample_occupancy,
    save_cmp,
    save_policy,
    simulation_gap_bound,
    spectral_gap,
    threshold_meaningful_renyi,
    threshold_meaningful_tv,
    total_variation,
    truncation_length,
    tv_extrema_oracle,
    tv_known_K,
    tv_known_single,
    tv_unknown,
    validate_cmp,
    verify_cover,
    vertex_rep,
    weight_diagnostics,
    weissman_budget,
    weissman_epsilon,
)

__all__ = [name for name in dir() if not name.startswith("_")]
