"""Permutation trinomials a*x + b*x^q + x^(2q-1) over F_{q^2}: classification and checks."""

from .classify import Verdict, exhaustive_verify, sample_verify, theorem_a, theorem_b
from .field import FieldCtx, FieldError, build_context, context_for_q
from .trinomial import Trinomial, is_permutation, power_sum

__all__ = [
    "FieldCtx",
    "FieldError",
    "Trinomial",
    "Verdict",
    "build_context",
    "context_for_q",
    "exhaustive_verify",
    "is_permutation",
    "power_sum",
    "sample_verify",
    "theorem_a",
    "theorem_b",
]

__version__ = "0.1.0"
