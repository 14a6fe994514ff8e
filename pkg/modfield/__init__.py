"""Modular arithmetic package initialization."""

from .field import FieldSpec, field_for, is_prime, mul_mod, pow_mod, two_adicity
from .sampling import make_rng, sample_gaussian, sample_gaussian_vector, sample_uniform
from .search import find_prime, find_root_of_unity, is_primitive_root_of_unity

__all__ = [
    "FieldSpec",
    "field_for",
    "is_prime",
    "mul_mod",
    "pow_mod",
    "two_adicity",
    "make_rng",
    "sample_gaussian",
    "sample_gaussian_vector",
    "sample_uniform",
    "find_prime",
    "find_root_of_unity",
    "is_primitive_root_of_unity",
]
