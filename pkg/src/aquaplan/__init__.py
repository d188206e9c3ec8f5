"""Planning toolkit for underwater event monitoring.

Submodules: acoustic channel attenuation (:mod:`.channel`), event
detection and wake-up placement (:mod:`.sensing`), age-of-information
analytics for the M/M/1 reporting queue (:mod:`.aoi`), surrogate models
(:mod:`.surrogate`), acquisition functions (:mod:`.acquisition`), the
optimization loop (:mod:`.optimizer`), discrete-event simulation
(:mod:`.simkit`) and the command-line front end (:mod:`.cli`).
"""

__version__ = "0.1.0"

from .errors import (AquaplanError, ConstraintError, DomainError,
                     EvaluationAbort, FitError, SingularityError,
                     StabilityError, StateError, TrainingError)
from .channel import ChannelParams, thorp_absorption, attenuation_db, attenuation_linear
from .sensing import (SensorLayout, WakeupParams, P1Result, poisson_pmf,
                      detection_probability, wakeup_expectation, solve_p1)
from .aoi import (QueueParams, ChuSpace, aoi_violation, status_probability,
                  semantic_objective)
from .surrogate import (GpModel, MlpModel, gp_fit, gp_predict, mlp_fit,
                        mlp_predict, split_train_test, model_to_json,
                        model_from_json)
from .acquisition import (AcquisitionState, expected_improvement,
                          adaptive_expected_improvement, initial_state,
                          recalibrate)
from .optimizer import (BoConfig, BoTrace, TraceRow, optimize_rate,
                        optimize_placement, compare_acquisitions,
                        iterations_to_target, evals_to_own_best,
                        rate_objective, placement_objective, round_half_down)
from .simkit import (ScenarioConfig, AoiSample, DelaySeries, simulate_mm1_aoi,
                     simulate_delay_comparison, horizon_for_departures)

__all__ = [
    "__version__",
    "AquaplanError", "ConstraintError", "DomainError", "EvaluationAbort",
    "FitError", "SingularityError", "StabilityError", "StateError",
    "TrainingError",
    "ChannelParams", "thorp_absorption", "attenuation_db", "attenuation_linear",
    "SensorLayout", "WakeupParams", "P1Result", "poisson_pmf",
    "detection_probability", "wakeup_expectation", "solve_p1",
    "QueueParams", "ChuSpace", "aoi_violation", "status_probability",
    "semantic_objective",
    "GpModel", "MlpModel", "gp_fit", "gp_predict", "mlp_fit", "mlp_predict",
    "split_train_test", "model_to_json", "model_from_json",
    "AcquisitionState", "expected_improvement",
    "adaptive_expected_improvement", "initial_state", "recalibrate",
    "BoConfig", "BoTrace", "TraceRow", "optimize_rate", "optimize_placement",
    "compare_acquisitions", "iterations_to_target", "evals_to_own_best",
    "rate_objective", "placement_objective", "round_half_down",
    "ScenarioConfig", "AoiSample", "DelaySeries", "simulate_mm1_aoi",
    "simulate_delay_comparison", "horizon_for_departures",
]
