"""
Randomness utilities. Every random draw in the toolkit flows through a
numpy Generator created by make_rng, so transcripts replay from a seed.
"""

from functools import lru_cache
from typing import Tuple

import numpy as np

from .field import FieldSpec

DEFAULT_TAIL_SIGMAS = 6


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """
    Seeded generator; extra integers select an independent sub-stream.

    Args:
        seed: Root seed
        stream: Optional stream identifiers (party id, layer index, ...)
    """
    return np.random.default_rng(np.random.SeedSequence([seed, *stream]))


@lru_cache(maxsize=32)
def _gaussian_table(sigma: float, tail: int) -> Tuple[np.ndarray, np.ndarray]:
    bound = int(np.floor(tail * sigma))
    support = np.arange(-bound, bound + 1, dtype=np.int64)
    weights = np.exp(-(support.astype(np.float64) ** 2) / (2.0 * sigma * sigma))
    return support, weights / weights.sum()


def sample_gaussian_vector(
    sigma: float,
    size: int,
    rng: np.random.Generator,
    tail: int = DEFAULT_TAIL_SIGMAS,
) -> np.ndarray:
    """
    Discrete Gaussian samples, exact on the support |x| <= tail * sigma.

    Args:
        sigma: Standard deviation parameter (> 0)
        size: Number of samples
        rng: Generator owned by the caller
        tail: Tail cut in multiples of sigma

    Returns:
        int64 array of signed samples
    """
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    support, probs = _gaussian_table(float(sigma), tail)
    return rng.choice(support, size=size, p=probs)


def sample_gaussian(sigma: float, rng: np.random.Generator, tail: int = DEFAULT_TAIL_SIGMAS) -> int:
    """Single discrete Gaussian draw bounded by tail * sigma."""
    return int(sample_gaussian_vector(sigma, 1, rng, tail)[0])


def sample_uniform(f: FieldSpec, size, rng: np.random.Generator) -> np.ndarray:
    """Uniform residues mod f.modulus in the field's storage dtype."""
    values = rng.integers(0, f.modulus, size=size, dtype=np.int64)
    if f.dtype is object:
        return values.astype(object)
    return values
