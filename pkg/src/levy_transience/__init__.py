"""Transience classification of Levy-type processes.

Decides, from a process family's symbol and jump measure, whether the
process is kappa-weakly or kappa-strongly transient: integral tests over
small frequencies, scaling-index rules, jump-tail criteria, a rule-engine
classifier with boundary search, and Monte Carlo validation of the analytic
verdicts via occupation integrals.
"""

__version__ = "0.1.0"

from .densities import (
    RadialLevyDensity,
    finite_range_density,
    modified_density,
    power_density,
    power_log_density,
    stable_density,
    table_density,
)
from .symbols import (
    SymbolModel,
    brownian_drift,
    custom_model,
    eval_symbol,
    finite_jump_model,
    inf_re_symbol,
    isotropic_stable,
    load_model,
    model_from_config,
    radial_jump_model,
    radiality_check,
    sector_check,
    stable_like,
    sup_abs_im_symbol,
    sup_abs_symbol,
    symmetry_check,
)
from .verdicts import CONVERGES, DIVERGES, INCONCLUSIVE, DivergenceVerdict
from .cf_integrals import (
    WeightFunction,
    r_independence_report,
    strong_integral_f,
    strong_integral_kappa,
    weak_integral_f,
    weak_integral_kappa,
)
from .index_rules import (
    PruittIndices,
    RuleOutcome,
    index_bound_rules,
    lower_index,
    moment_rules,
    pruitt_indices,
    scaling_rules,
    shape_diagnostic,
    upper_index,
)
from .levy_tails import (
    comparison_transfer,
    cos_moment_condition,
    density_floor_test,
    rv_classify,
    borderline_index_test,
    integrated_tail,
    model_perturbation_report,
    perturbation_distance,
    perturbation_equivalence,
    split_tail_tests,
    rv_index_fit,
    tail_functionals,
    tail_mass,
    tail_test_strong,
    tail_test_weak,
    truncated_second_moment,
)
from .classifier import (
    TransienceReport,
    classify,
    kappa_boundary,
    transience_gate,
)
from .montecarlo import (
    OccupationEstimate,
    SimConfig,
    ecf_check,
    last_exit_estimate,
    occupation_integral_estimate,
    positivity_diagnostic,
    sample_levy_marginal,
    simulate_stable_like_path,
)
