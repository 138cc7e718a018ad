"""hottloop: a small checker for homotopy type theory with a circle and univalence.

The shipped standard library proves that the loop space of the circle is
equivalent to the integers, and the normalizer runs that proof to compute
winding numbers.
"""
from .api import evaluate, int_to_term, term_to_int, winding
from .checker import CheckFailed, Environment, TypeCheckError, check, check_module, convertible, infer
from .normalizer import BudgetExceeded, EvalConfig, normalize
from .pretty import pretty_print
from .syntax import Diagnostic, ParseError, parse_module, parse_term

__all__ = [
    "BudgetExceeded", "CheckFailed", "Diagnostic", "Environment", "EvalConfig", "ParseError",
    "TypeCheckError", "check", "check_module", "convertible", "evaluate", "infer",
    "int_to_term", "normalize", "parse_module", "parse_term", "pretty_print", "term_to_int",
    "winding",
]
__version__ = "0.1.0"
