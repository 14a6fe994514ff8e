"""Homomorphic secret sharing package initialization."""

from .chain import ChainFinding, ModulusChain, require_valid_chain, validate_chain
from .sharing import SharePair, hom_rec, hom_share, recombine_clear, split_clear

__all__ = [
    "ChainFinding",
    "ModulusChain",
    "require_valid_chain",
    "validate_chain",
    "SharePair",
    "hom_rec",
    "hom_share",
    "recombine_clear",
    "split_clear",
]
