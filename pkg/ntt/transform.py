"""
One-dimensional number-theoretic transforms over a prime field.

Transforms act on the last axis of an array, so a batch of rows (the rows of
an image, the two halves of a ciphertext) goes through in one call.
"""

from __future__ import annotations

import logging
from functools import lru_cache
from typing import List, Sequence

import numpy as np

from modfield import FieldSpec, is_primitive_root_of_unity, pow_mod
from utils.exceptions import BadRoot

logger = logging.getLogger(__name__)

# hi/lo split for int64 matrix products in the direct path
_SPLIT_BITS = 16
_DIRECT_INT64_MAX_LENGTH = 1 << 15


def is_power_of_two(value: int) -> bool:
    return value > 0 and value & (value - 1) == 0


@lru_cache(maxsize=64)
def _bit_reverse(length: int) -> np.ndarray:
    bits = length.bit_length() - 1
    idx = np.arange(length)
    rev = np.zeros(length, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev


@lru_cache(maxsize=256)
def _stage_twiddles(omega: int, length: int, f: FieldSpec) -> List[np.ndarray]:
    stages = []
    half = 1
    while half < length:
        w_m = pow_mod(omega, length // (2 * half), f)
        powers = [1] * half
        for j in range(1, half):
            powers[j] = powers[j - 1] * w_m % f.modulus
        stages.append(np.array(powers, dtype=f.dtype))
        half *= 2
    return stages


@lru_cache(maxsize=64)
def _direct_matrix(omega: int, length: int, f: FieldSpec) -> np.ndarray:
    powers = [1] * length
    for k in range(1, length):
        powers[k] = powers[k - 1] * omega % f.modulus
    exps = np.outer(np.arange(length), np.arange(length)) % length
    return np.array(powers, dtype=f.dtype)[exps]


def _radix2(x: np.ndarray, omega: int, f: FieldSpec) -> np.ndarray:
    length = x.shape[-1]
    lead = x.shape[:-1]
    p = f.modulus
    a = x[..., _bit_reverse(length)]

    half = 1
    for tw in _stage_twiddles(omega, length, f):
        blocks = a.reshape(*lead, length // (2 * half), 2 * half)
        even = blocks[..., :half]
        odd = blocks[..., half:] * tw % p
        a = np.concatenate(((even + odd) % p, (even - odd) % p), axis=-1)
        half *= 2

    return a.reshape(*lead, length)


def _direct(x: np.ndarray, omega: int, f: FieldSpec) -> np.ndarray:
    length = x.shape[-1]
    p = f.modulus
    matrix = _direct_matrix(omega, length, f)
    rows = x.reshape(-1, length)

    if f.dtype is object or length >= _DIRECT_INT64_MAX_LENGTH:
        y = rows.astype(object).dot(matrix.T.astype(object)) % p
        if f.dtype is not object:
            y = y.astype(np.int64)
    else:
        lo = rows & ((1 << _SPLIT_BITS) - 1)
        hi = rows >> _SPLIT_BITS
        y = ((hi @ matrix.T) % p * (1 << _SPLIT_BITS) + (lo @ matrix.T)) % p

    return y.reshape(x.shape)


def uses_fast_path(length: int, f: FieldSpec) -> bool:
    """Radix-2 applies to power-of-two lengths within the field's 2-adicity."""
    return is_power_of_two(length) and length.bit_length() - 1 <= f.two_adicity


def ntt_batch(x: np.ndarray, omega: int, f: FieldSpec, force_direct: bool = False) -> np.ndarray:
    """
    Transform along the last axis without validating omega.

    Callers that build omega from find_root_of_unity use this directly.
    """
    if not force_direct and uses_fast_path(x.shape[-1], f):
        return _radix2(x, omega, f)
    return _direct(x, omega, f)


def _check_root(omega: int, length: int, f: FieldSpec):
    if not is_primitive_root_of_unity(omega % f.modulus, length, f):
        raise BadRoot(f"{omega} is not a primitive {length}-th root of unity mod {f.modulus}")


def ntt_1d(x: Sequence[int] | np.ndarray, omega: int, f: FieldSpec) -> np.ndarray:
    """
    Forward transform y_k = sum_i x_i * omega^(i*k) mod p.

    Args:
        x: Residue vector of length L (or a batch with L on the last axis)
        omega: Primitive L-th root of unity
        f: Field context

    Returns:
        Transformed residues in natural order

    Raises:
        BadRoot: If omega does not have order exactly L
    """
    arr = f.array(x)
    _check_root(omega, arr.shape[-1], f)
    return ntt_batch(arr, omega, f)


def intt_1d(y: Sequence[int] | np.ndarray, omega: int, f: FieldSpec) -> np.ndarray:
    """
    Inverse transform: ntt_1d with omega^-1, scaled by L^-1.

    Raises:
        BadRoot: If omega does not have order exactly L
    """
    arr = f.array(y)
    length = arr.shape[-1]
    _check_root(omega, length, f)
    return inverse_batch(arr, omega, f)


def inverse_batch(y: np.ndarray, omega: int, f: FieldSpec) -> np.ndarray:
    """Unvalidated inverse along the last axis."""
    length = y.shape[-1]
    inv_len = f.inverse(length % f.modulus)
    out = ntt_batch(y, f.inverse(omega), f)
    return out * inv_len % f.modulus


def dft_oracle_1d(x: Sequence[int], omega: int, modulus: int) -> List[int]:
    """Quadratic reference transform in plain integers (test oracle)."""
    length = len(x)
    return [
        sum(int(x[i]) * pow(omega, i * k, modulus) for i in range(length)) % modulus
        for k in range(length)
    ]
