"""
Ring elements of Z_m[x]/(x^n + 1) and the negacyclic transform.

The evaluation domain stores a(psi^(2i+1)) for i = 0..n-1 in natural order,
so pointwise products there are negacyclic products of polynomials.
"""

from __future__ import annotations

from collections import Counter
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterator, Tuple

import numpy as np

from modfield import FieldSpec, pow_mod
from ntt.transform import ntt_batch
from utils.exceptions import GeometryMismatch

TRANSFORM_CATEGORIES = ("ciphertext", "encrypt", "decrypt", "plaintext", "keygen")

_active_counters: ContextVar[Tuple[Counter, ...]] = ContextVar("ring_transform_counters", default=())


@contextmanager
def count_transforms() -> Iterator[Counter]:
    """
    Count ring transforms over q performed in this thread while the block runs.

    Scopes nest; every open scope sees every transform.

    Yields:
        Counter keyed by category (ciphertext, encrypt, decrypt, plaintext, keygen)
    """
    counts: Counter = Counter()
    token = _active_counters.set(_active_counters.get() + (counts,))
    try:
        yield counts
    finally:
        _active_counters.reset(token)


def record_transforms(category: str, amount: int = 1):
    for counts in _active_counters.get():
        counts[category] += amount


class RingDomain(str, Enum):
    COEFFICIENT = "coefficient"
    EVALUATION = "evaluation"


@dataclass(frozen=True, eq=False)
class RingElem:
    """
    Polynomial with n residues mod `modulus`.

    Attributes:
        coeffs: Coefficients or evaluations, depending on domain
        domain: Coefficient or Evaluation
        modulus: Ring modulus (q for ciphertext parts, p_e for encoded plaintexts)
    """

    coeffs: np.ndarray
    domain: RingDomain
    modulus: int

    def __post_init__(self):
        if self.coeffs.ndim != 1:
            raise GeometryMismatch(f"Ring element must be a vector, got shape {self.coeffs.shape}")
        self.coeffs.setflags(write=False)

    @property
    def n(self) -> int:
        return self.coeffs.shape[0]

    def with_coeffs(self, coeffs: np.ndarray, domain: RingDomain | None = None) -> "RingElem":
        return RingElem(coeffs, domain or self.domain, self.modulus)


@lru_cache(maxsize=16)
def _twists(psi: int, n: int, f: FieldSpec) -> Tuple[np.ndarray, np.ndarray]:
    p = f.modulus
    forward = [1] * n
    for j in range(1, n):
        forward[j] = forward[j - 1] * psi % p

    psi_inv = f.inverse(psi)
    inverse = [f.inverse(n % p)] * n
    for j in range(1, n):
        inverse[j] = inverse[j - 1] * psi_inv % p

    return np.array(forward, dtype=f.dtype), np.array(inverse, dtype=f.dtype)


def negacyclic_ntt(x: np.ndarray, psi: int, f: FieldSpec) -> np.ndarray:
    """
    Evaluate polynomials (last axis) at the odd powers of psi.

    Args:
        x: Coefficients, reduced mod p
        psi: Primitive 2n-th root of unity mod p
        f: Field context
    """
    n = x.shape[-1]
    forward, _ = _twists(psi, n, f)
    return ntt_batch(x * forward % f.modulus, pow_mod(psi, 2, f), f)


def negacyclic_intt(y: np.ndarray, psi: int, f: FieldSpec) -> np.ndarray:
    """Inverse of negacyclic_ntt."""
    n = y.shape[-1]
    _, inverse = _twists(psi, n, f)
    omega_inv = f.inverse(pow_mod(psi, 2, f))
    return ntt_batch(y, omega_inv, f) * inverse % f.modulus


def negacyclic_convolution_oracle(a, b, modulus: int) -> list:
    """Quadratic product in Z_m[x]/(x^n + 1) (test oracle)."""
    n = len(a)
    out = [0] * n
    for i in range(n):
        for j in range(n):
            k = i + j
            term = int(a[i]) * int(b[j])
            if k < n:
                out[k] += term
            else:
                out[k - n] -= term
    return [v % modulus for v in out]
