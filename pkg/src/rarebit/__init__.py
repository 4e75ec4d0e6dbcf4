"""Automatic sequences along polynomials: generators, pseudorandomness
measures and certified maximum-order-complexity lower bounds."""

__version__ = "0.1.0"

from .digits import DigitString, count_pattern, digit_sum, to_digits
from .polynomials import IntPolynomial, eval_poly, normalize_nonnegative, translate, z_constant
from .sequences import (
    GeneratorDescriptor,
    PatternSpec,
    Sequence,
    generate_prefix,
    pattern_value,
    thue_morse,
)

__all__ = [
    "DigitString",
    "GeneratorDescriptor",
    "IntPolynomial",
    "PatternSpec",
    "Sequence",
    "count_pattern",
    "digit_sum",
    "eval_poly",
    "generate_prefix",
    "normalize_nonnegative",
    "pattern_value",
    "thue_morse",
    "to_digits",
    "translate",
    "z_constant",
]
