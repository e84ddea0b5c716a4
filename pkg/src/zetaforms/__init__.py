"""Linear forms in odd zeta values: exact construction, arithmetic
normalisers, exponential asymptotics, and the resulting certificates."""

from .exactnum import DEFAULT_DIGITS, PrecisionContext
from .formbuilder import FormParameters, LinearForm, build_form, eval_series, verify_identity

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_DIGITS",
    "FormParameters",
    "LinearForm",
    "PrecisionContext",
    "build_form",
    "eval_series",
    "verify_identity",
]
