"""
Homomorphic secret sharing of packed ciphertexts.

hom_share turns [y] into ([y - s_B mod p_A], s_B); hom_rec adds s_B back under
encryption.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from modfield import FieldSpec
from ringbfv import Ciphertext, PlainVec, RlweParams, add_plain
from ringbfv.noise import budget_bits, within_budget
from utils.exceptions import ChainViolation, LengthMismatch, NoiseExhausted
from .chain import ModulusChain

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SharePair:
    """
    Attributes:
        alice_ct: Encryption of y - s_B (mod p_A, possibly offset by p_A)
        bob_share: s_B, uniform in [0, p_A)
        share_modulus: p_A
    """

    alice_ct: Ciphertext
    bob_share: PlainVec
    share_modulus: FieldSpec


def _check_chain(chain: ModulusChain, params: RlweParams):
    if chain.p_a.modulus > params.p_e.modulus:
        raise ChainViolation(f"p_A = {chain.p_a.modulus} exceeds p_E = {params.p_e.modulus}")
    if chain.p_e.modulus != params.p_e.modulus:
        raise ChainViolation(
            f"Chain p_E = {chain.p_e.modulus} differs from the scheme's {params.p_e.modulus}"
        )


def _check_budget(ct: Ciphertext, params: RlweParams, step: str):
    threshold = params.decryption_threshold
    if not within_budget(ct.noise_bound, threshold):
        raise NoiseExhausted(
            f"{step} leaves {budget_bits(ct.noise_bound, threshold):.2f} bits of noise budget"
        )


def hom_share(ct_y: Ciphertext, chain: ModulusChain, params: RlweParams,
              rng: np.random.Generator, zero_mask: bool = False) -> SharePair:
    """
    Randomize an encrypted vector into Alice's encrypted share and Bob's mask.

    The encrypted share holds y - s_B + p_A (mod p_E), which reduces to
    y - s_B mod p_A once Alice decrypts and reduces.

    Args:
        ct_y: Ciphertext of y (either domain)
        chain: Moduli chain
        params: RLWE parameters
        rng: Bob's generator
        zero_mask: Force s_B = 0 (test hook)

    Raises:
        ChainViolation: If p_A > p_E
        NoiseExhausted: If the subtraction exhausts the budget
    """
    _check_chain(chain, params)
    p_a = chain.p_a.modulus
    p_e = params.p_e.modulus

    if zero_mask:
        mask = np.zeros(params.n, dtype=np.int64)
    else:
        mask = rng.integers(0, p_a, size=params.n, dtype=np.int64)

    # subtract s_B - p_A so the slots stay non-negative before Alice reduces
    offset = PlainVec(params.p_e.array((mask - p_a) % p_e))
    alice_ct = add_plain(ct_y, offset, -1, params)
    _check_budget(alice_ct, params, "hom_share")

    return SharePair(alice_ct=alice_ct, bob_share=PlainVec(params.p_e.array(mask)),
                     share_modulus=chain.p_a)


def hom_rec(alice_ct: Ciphertext, bob_share: PlainVec, chain: ModulusChain,
            params: RlweParams) -> Ciphertext:
    """
    Add Bob's share back under encryption: decrypts to s_A + s_B, which is
    the shared value mod p_A (exactly, when p_A = p_E).

    Raises:
        ChainViolation: If the chain does not fit the scheme
    """
    _check_chain(chain, params)
    out = add_plain(alice_ct, bob_share, 1, params)
    _check_budget(out, params, "hom_rec")
    return out


def recombine_clear(s_a, s_b, p_a: FieldSpec) -> np.ndarray:
    """
    (s_a + s_b) mod p_A element-wise.

    Raises:
        LengthMismatch: If the shares differ in shape
    """
    a = p_a.array(s_a)
    b = p_a.array(s_b)
    if a.shape != b.shape:
        raise LengthMismatch(f"Share shapes differ: {a.shape} vs {b.shape}")
    return (a + b) % p_a.modulus


def split_clear(y, p_a: FieldSpec, rng: np.random.Generator):
    """Fresh additive shares (y - r, r) mod p_A."""
    values = p_a.array(y)
    r = rng.integers(0, p_a.modulus, size=values.shape, dtype=np.int64)
    return (values - r) % p_a.modulus, p_a.array(r)
