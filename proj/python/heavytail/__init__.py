"""Robust mean estimation and perturbed exploration for heavy-tailed bandits."""

from ._core import (
    BanditInstance,
    ConfigError,
    NoiseSpec,
    PerturbationSpec,
    ape_lower_rate,
    cdf,
    check_assumption2,
    compute_bp,
    draw_reward,
    gap_dependent_bound,
    gap_independent_bound,
    hazard,
    inverse_cdf,
    ln_zeta,
    make_ape_counterexample,
    make_gap_instance,
    make_ucb_counterexample,
    median_of_means,
    nu_p_bound,
    optimal_params,
    p_robust_estimate,
    psi,
    run_experiment_file,
    run_experiment_json,
    sample,
    sample_mean,
    tail_bound,
    truncated_mean,
    ucb_lower_rate,
)

__all__ = [
    "BanditInstance",
    "ConfigError",
    "NoiseSpec",
    "PerturbationSpec",
    "ape_lower_rate",
    "cdf",
    "check_assumption2",
    "compute_bp",
    "draw_reward",
    "gap_dependent_bound",
    "gap_independent_bound",
    "hazard",
    "inverse_cdf",
    "ln_zeta",
    "make_ape_counterexample",
    "make_gap_instance",
    "make_ucb_counterexample",
    "median_of_means",
    "nu_p_bound",
    "optimal_params",
    "p_robust_estimate",
    "psi",
    "run_experiment_file",
    "run_experiment_json",
    "sample",
    "sample_mean",
    "tail_bound",
    "truncated_mean",
    "ucb_lower_rate",
]
