"""Finite-model toolkit for justification stit logic: syntax, models and
their constraints, truth evaluation, Hilbert proof checking, and a random
model harness."""

from .model import FiniteJstitModel, dump_model, load_model, validate
from .semantics import Evaluator, counterexample, evaluate, valid_in_model
from .syntax import parse_formula, parse_term, print_formula

__version__ = "0.1.0"

__all__ = [
    "FiniteJstitModel", "load_model", "dump_model", "validate", "Evaluator", "evaluate",
    "counterexample", "valid_in_model", "parse_formula", "parse_term", "print_formula",
]
