"""
Prime fields and exact modular arithmetic for moduli below 2^62.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Iterable

import numpy as np
import sympy

from utils.exceptions import NotPrime

logger = logging.getLogger(__name__)

MODULUS_CEILING = 1 << 62

# Residues below this bound multiply inside int64 without overflow.
INT64_SAFE_MODULUS = 1 << 31

# Deterministic for every n < 3.3e24, which covers all 64-bit inputs.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """
    Deterministic Miller-Rabin primality test.

    Args:
        n: Candidate integer

    Returns:
        True if n is prime
    """
    if n < 2:
        return False
    for w in _MR_WITNESSES:
        if n % w == 0:
            return n == w

    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1

    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def two_adicity(value: int) -> int:
    """Largest k with 2^k dividing value (value > 0)."""
    return (value & -value).bit_length() - 1


@dataclass(frozen=True)
class FieldSpec:
    """
    Arithmetic context of a prime field Z_p.

    Attributes:
        modulus: The prime p (< 2^62)
        barrett_shift: k such that every reduced product is below 2^k
        barrett_factor: floor(2^k / p)
        two_adicity: Largest s with 2^s | (p - 1)
        generator: A primitive root of Z_p*
    """

    modulus: int
    barrett_shift: int
    barrett_factor: int
    two_adicity: int
    generator: int

    @classmethod
    def from_prime(cls, modulus: int) -> "FieldSpec":
        """
        Build the field context for a prime modulus.

        Raises:
            NotPrime: If modulus is composite or outside [2, 2^62)
        """
        if not 2 <= modulus < MODULUS_CEILING:
            raise NotPrime(f"Modulus {modulus} outside [2, 2^62)")
        if not is_prime(modulus):
            raise NotPrime(f"Modulus {modulus} is not prime")

        shift = 2 * modulus.bit_length()
        generator = 1 if modulus == 2 else int(sympy.primitive_root(modulus))

        spec = cls(
            modulus=modulus,
            barrett_shift=shift,
            barrett_factor=(1 << shift) // modulus,
            two_adicity=two_adicity(modulus - 1),
            generator=generator,
        )
        logger.debug(
            f"Field p={modulus} ({modulus.bit_length()} bits), "
            f"2-adicity={spec.two_adicity}, generator={generator}"
        )
        return spec

    @property
    def bits(self) -> int:
        return self.modulus.bit_length()

    @property
    def dtype(self) -> Any:
        """numpy storage type able to hold a full product before reduction."""
        return np.int64 if self.modulus < INT64_SAFE_MODULUS else object

    def barrett_reduce(self, x: int) -> int:
        """Reduce 0 <= x < p^2 using the precomputed Barrett factor."""
        quotient = (x * self.barrett_factor) >> self.barrett_shift
        r = x - quotient * self.modulus
        while r >= self.modulus:
            r -= self.modulus
        return r

    def array(self, values: Iterable[int] | np.ndarray) -> np.ndarray:
        """Reduce arbitrary integers into a residue array of this field's dtype."""
        if self.dtype is object:
            arr = np.array(values, dtype=object)
            return arr % self.modulus
        arr = np.asarray(values)
        if arr.dtype == object:
            return (arr % self.modulus).astype(np.int64)
        return np.mod(arr.astype(np.int64), self.modulus)

    def zeros(self, shape: int | tuple[int, ...]) -> np.ndarray:
        if self.dtype is object:
            return np.zeros(shape, dtype=np.int64).astype(object)
        return np.zeros(shape, dtype=np.int64)

    def centered(self, values: np.ndarray) -> np.ndarray:
        """Lift residues to the centered range (-p/2, p/2]."""
        half = self.modulus // 2
        return np.where(values > half, values - self.modulus, values)

    def inverse(self, value: int) -> int:
        return pow(value, self.modulus - 2, self.modulus)


@lru_cache(maxsize=None)
def field_for(modulus: int) -> FieldSpec:
    """Cached FieldSpec lookup; fields are immutable and shared freely."""
    return FieldSpec.from_prime(modulus)


def mul_mod(a: int, b: int, f: FieldSpec) -> int:
    """
    Multiply two reduced residues.

    Args:
        a: Residue in [0, p)
        b: Residue in [0, p)
        f: Field context

    Returns:
        a * b mod p via a double-width intermediate and Barrett reduction
    """
    return f.barrett_reduce(a * b)


def pow_mod(base: int, exp: int, f: FieldSpec) -> int:
    """
    Square-and-multiply exponentiation in the field.

    Args:
        base: Residue in [0, p)
        exp: Non-negative exponent
        f: Field context

    Returns:
        base^exp mod p
    """
    result = 1 % f.modulus
    while exp > 0:
        if exp & 1:
            result = mul_mod(result, base, f)
        base = mul_mod(base, base, f)
        exp >>= 1
    return result
