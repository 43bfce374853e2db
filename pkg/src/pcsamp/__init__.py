"""Exact analysis of grid sampling for piecewise constant signals.

The package answers, with exact rational arithmetic throughout:

* which per-region sample-count patterns a signal can produce as the
  sampling grid slides (:mod:`pcsamp.sampler`);
* how precisely a set of observed patterns locates each discontinuity
  relative to a chosen reference discontinuity (:mod:`pcsamp.inference`);
* what the worst-case-optimal piecewise constant estimate looks like and
  what error energy it guarantees (:mod:`pcsamp.estimator`);
* whether those closed-form guarantees survive brute-force search over
  every feasible placement of the unknown discontinuities
  (:mod:`pcsamp.oracle`).
"""

from .signal_core import (
    AmplitudeViolation,
    GenericityViolation,
    PiecewiseFunction,
    Rational,
    Region,
    RegionViolation,
    SignalSpec,
    SpecViolation,
    Translation,
    as_rational,
    evaluate,
    find_genericity_violation,
    translate,
    truth_function,
    validate_spec,
)
from .sampler import (
    AtlasCell,
    PatternAtlas,
    SamplingPattern,
    count_direct,
    cumulative_count,
    delta_chain,
    enumerate_atlas,
    kappa_d,
)
from .inference import (
    Chain,
    ChainStructure,
    InconsistentObservations,
    ObservationSet,
    UncertaintyModel,
    chain_analysis,
    cumulative_values,
    infer_model,
)
from .estimator import (
    Estimate,
    EstimateCell,
    ErrorReport,
    PartialObservations,
    absolute_error_bound,
    amp,
    best_reference,
    closed_form_energy,
    estimate_full,
    estimate_partial,
)
from .oracle import (
    CheckResult,
    EmptyFeasibleSet,
    FeasibleBox,
    PerturbationReport,
    SweepSummary,
    WorstCase,
    Zone,
    energy_between,
    exhaustive_consistency_sweep,
    feasible_box,
    minimax_report,
    perturbation_minimax_check,
    random_spec,
    verify_scenario,
    worst_case_energy,
)

__version__ = "0.1.0"
