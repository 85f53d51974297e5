from .plan import (
    METHODS, CutPlanError, CutGroup, Fragment, CutPlan, build_plan, plan_bipartition,
    plan_from_dict, save_plan, load_plan,
)
from .executor import EstimationError, FragmentProgram
from .estimator import (
    NumericalInvariantError, Estimate, estimate, shot_values, sample_cut,
    exact_cut_expectation, exact_qtilde, check_unbiased,
    plan_overhead, sampling_overhead, required_shots,
)

__all__ = [
    'METHODS', 'CutPlanError', 'CutGroup', 'Fragment', 'CutPlan', 'build_plan', 'plan_bipartition',
    'plan_from_dict', 'save_plan', 'load_plan',
    'EstimationError', 'FragmentProgram',
    'NumericalInvariantError', 'Estimate', 'estimate', 'shot_values', 'sample_cut',
    'exact_cut_expectation', 'exact_qtilde', 'check_unbiased',
    'plan_overhead', 'sampling_overhead', 'required_shots',
]
