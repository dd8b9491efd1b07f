"""Numerical laboratory for generalized Szász-Mirakjan-Durrmeyer operators."""

__version__ = "0.1.0"

from .errors import ConfigurationError, DomainError, EvaluationError, UsageError  # noqa: E402
from .evaluator import (OperatorEvaluation, QuadratureSpec, apply, apply_discrete_szasz,  # noqa: E402
                        apply_grid, closed_form, inner_integral)
from .functions import TargetFunction, builtin  # noqa: E402
from .kernel import TruncationWindow, UnSequence, poisson_weight, truncation_window  # noqa: E402
from .moments import (MomentPolynomial, central_moment, moment_oracle, raw_moment,  # noqa: E402
                      recurrence_step, remark1_limit_check)

__all__ = [
    "ConfigurationError", "DomainError", "EvaluationError", "UsageError",
    "OperatorEvaluation", "QuadratureSpec", "apply", "apply_discrete_szasz", "apply_grid",
    "closed_form", "inner_integral", "TargetFunction", "builtin", "TruncationWindow",
    "UnSequence", "poisson_weight", "truncation_window", "MomentPolynomial",
    "central_moment", "moment_oracle", "raw_moment", "recurrence_step", "remark1_limit_check",
]
