"""Integers represented by four ternary quadratic forms of determinant
7, 11, 14 and 23: decision procedure, local obstructions, and explicit
representation certificates."""

from .forms import (
    ClassList,
    TernaryForm,
    Vector3,
    enumerate_classes,
    enumerate_representations,
    evaluate,
    gram_determinant,
    is_equivalent,
    is_positive_definite,
    reduce,
    represents,
)
from .obstruction import THEOREMS, ExclusionPattern, decide, excluded_multiples, obstruction_table
from .witness import Certificate, find_representation, generate, verify

__version__ = "0.1.0"

__all__ = [
    "ClassList", "TernaryForm", "Vector3", "enumerate_classes", "enumerate_representations",
    "evaluate", "gram_determinant", "is_equivalent", "is_positive_definite", "reduce",
    "represents", "THEOREMS", "ExclusionPattern", "decide", "excluded_multiples",
    "obstruction_table", "Certificate", "find_representation", "generate", "verify",
]
