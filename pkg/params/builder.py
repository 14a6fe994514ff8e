"""
Parameter selection: moduli chain, plaintext modulus and ciphertext modulus.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional

from hss import ModulusChain, require_valid_chain
from modfield import find_prime
from modfield.sampling import DEFAULT_TAIL_SIGMAS
from ntt.transform import is_power_of_two
from ringbfv import DEFAULT_SIGMA, RlweParams
from ringbfv.noise import layer_bound
from utils.exceptions import ChainViolation, ParameterError, RangeViolation
from .profile import PrecisionProfile, min_pntt

logger = logging.getLogger(__name__)

# Below this lattice dimension a parameter set is for testing only.
SECURE_MIN_N = 1024


class BuildMode(str, Enum):
    UNIFIED = "unified"
    SPLIT = "split"


@dataclass(frozen=True)
class ParamSet:
    """
    Complete protocol parameters.

    Attributes:
        chain: Moduli chain p_N, p_A, p_E
        rlwe: Scheme parameters (rlwe.p_e is chain.p_e)
        profile: Precision profile the chain was sized for
        mode: Unified or split moduli
        accumulation: Ciphertexts summed before sharing that q was sized for
        preset_name: Optional preset label
        insecure: Set for test-only lattice dimensions
    """

    chain: ModulusChain
    rlwe: RlweParams
    profile: PrecisionProfile
    mode: BuildMode = BuildMode.UNIFIED
    accumulation: int = 1
    preset_name: Optional[str] = None
    insecure: bool = False

    def __post_init__(self):
        bound = min_pntt(self.profile)
        if self.chain.p_n.modulus < bound:
            raise RangeViolation(f"p_N = {self.chain.p_n.modulus} is below the range bound {bound}")
        if self.rlwe.p_e.modulus != self.chain.p_e.modulus:
            raise ChainViolation("Scheme plaintext modulus differs from the chain's p_E")

    @property
    def label(self) -> str:
        return self.preset_name or f"custom-n{self.rlwe.n}"

    def describe(self) -> Dict[str, Any]:
        """Plain-data summary, also the canonical input of the session digest."""
        return {
            "preset": self.preset_name,
            "mode": self.mode.value,
            "n": self.rlwe.n,
            "p_n": self.chain.p_n.modulus,
            "p_a": self.chain.p_a.modulus,
            "p_e": self.chain.p_e.modulus,
            "q": self.rlwe.q.modulus,
            "q_bits": self.rlwe.q.bits,
            "sigma": self.rlwe.sigma,
            "accumulation": self.accumulation,
            "insecure": self.insecure,
        }


def required_q(n: int, p_e: int, sigma: float = DEFAULT_SIGMA, accumulation: int = 1,
               tail: int = DEFAULT_TAIL_SIGMAS) -> int:
    """
    Smallest q (before the primality search) whose budget covers one layer.

    Assumes q = 1 mod p_e, so every slot wrap costs a remainder of 1.
    """
    fresh = int(math.floor(tail * sigma))
    bound = layer_bound(fresh, n, p_e, 1, accumulation)
    # delta / 2 - 1 > bound
    return p_e * (2 * bound + 3)


def select_q(n: int, p_e: int, sigma: float = DEFAULT_SIGMA, accumulation: int = 1,
             tail: int = DEFAULT_TAIL_SIGMAS) -> int:
    """
    Ciphertext modulus: the smallest prime >= required_q with q = 1 mod 2n*p_e.

    Raises:
        SearchExhausted: If no such prime exists below 2^62
    """
    q = find_prime(required_q(n, p_e, sigma, accumulation, tail), 1, 2 * n * p_e)
    logger.debug(f"Selected q = {q} ({q.bit_length()} bits) for n={n}, p_e={p_e}, acc={accumulation}")
    return q


def build_params(
    profile: PrecisionProfile,
    n: int,
    mode: BuildMode = BuildMode.UNIFIED,
    transform_length: int = 1,
    accumulation: int = 1,
    sigma: float = DEFAULT_SIGMA,
) -> ParamSet:
    """
    Size every modulus for a precision profile and lattice dimension.

    Args:
        profile: Precision profile
        n: Lattice dimension (power of two)
        mode: Unified (p_N = p_A = p_E) or split moduli
        transform_length: Image transform length p_N must support
        accumulation: Ciphertexts summed before sharing
        sigma: Gaussian parameter

    Returns:
        Validated parameter set

    Raises:
        ParameterError: If n is not a power of two
        SearchExhausted: If a prime search fails
        RangeViolation: If split moduli fail the no-wrap validator
    """
    if not is_power_of_two(n):
        raise ParameterError(f"Lattice dimension {n} is not a power of two")
    if accumulation < 1:
        raise ParameterError("accumulation must be at least 1")

    bound = min_pntt(profile)
    if mode == BuildMode.UNIFIED:
        p = find_prime(bound, 1, math.lcm(2 * n, transform_length))
        chain = ModulusChain.unified(p)
    else:
        p_n = find_prime(bound, 1, transform_length)
        p_e = find_prime(p_n, 1, 2 * n)
        chain = ModulusChain.from_moduli(p_n, p_e, p_e)
        require_valid_chain(chain, bound)

    q = select_q(n, chain.p_e.modulus, sigma, accumulation)
    rlwe = RlweParams.create(n, q, chain.p_e.modulus, sigma)
    insecure = n < SECURE_MIN_N
    if insecure:
        logger.warning(f"Lattice dimension n={n} is INSECURE; use only for testing")

    params = ParamSet(chain=chain, rlwe=rlwe, profile=profile, mode=mode,
                      accumulation=accumulation, insecure=insecure)
    logger.info(
        f"Built {mode.value} parameters: p_N={chain.p_n.modulus}, p_E={chain.p_e.modulus}, "
        f"lg q={rlwe.log_q:.2f}, n={n}"
    )
    return params
