"""
Ring-LWE parameter set for the BFV-style scheme.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

from modfield import FieldSpec, field_for, find_root_of_unity
from modfield.sampling import DEFAULT_TAIL_SIGMAS
from ntt.transform import is_power_of_two
from utils.exceptions import ParameterError

logger = logging.getLogger(__name__)

DEFAULT_SIGMA = 4.0


@dataclass(frozen=True)
class RlweParams:
    """
    Parameters of Z_q[x]/(x^n + 1) with plaintext slots mod p_e.

    Attributes:
        n: Lattice dimension (power of two)
        q: Ciphertext modulus field
        p_e: Plaintext modulus field
        sigma: Discrete Gaussian parameter
        psi: Primitive 2n-th root of unity mod q
        psi_p: Primitive 2n-th root of unity mod p_e
        tail: Gaussian tail cut in multiples of sigma
    """

    n: int
    q: FieldSpec
    p_e: FieldSpec
    sigma: float
    psi: int
    psi_p: int
    tail: int = DEFAULT_TAIL_SIGMAS

    def __post_init__(self):
        if not is_power_of_two(self.n) or self.n < 2:
            raise ParameterError(f"Lattice dimension {self.n} is not a power of two >= 2")
        two_n = 2 * self.n
        if (self.q.modulus - 1) % two_n:
            raise ParameterError(f"q = {self.q.modulus} is not 1 mod {two_n}")
        if (self.p_e.modulus - 1) % two_n:
            raise ParameterError(f"p_e = {self.p_e.modulus} is not 1 mod {two_n}")
        if self.q.modulus // self.p_e.modulus < 2:
            raise ParameterError(f"q = {self.q.modulus} leaves floor(q / p_e) < 2")
        if self.sigma <= 0:
            raise ParameterError(f"sigma must be positive, got {self.sigma}")

    @classmethod
    def create(cls, n: int, q: int, p_e: int, sigma: float = DEFAULT_SIGMA,
               tail: int = DEFAULT_TAIL_SIGMAS) -> "RlweParams":
        """
        Build parameters from raw moduli, deriving both 2n-th roots.

        Raises:
            ParameterError: If a congruence or size condition fails
        """
        q_field = field_for(q)
        p_field = field_for(p_e)
        try:
            psi = find_root_of_unity(2 * n, q_field)
            psi_p = find_root_of_unity(2 * n, p_field)
        except ValueError as e:
            raise ParameterError(str(e)) from e
        params = cls(n=n, q=q_field, p_e=p_field, sigma=sigma, psi=psi, psi_p=psi_p, tail=tail)
        logger.debug(
            f"RLWE n={n}, lg q={params.log_q:.2f}, p_e={p_e}, sigma={sigma}, delta={params.delta}"
        )
        return params

    @property
    def delta(self) -> int:
        """Plaintext scaling factor floor(q / p_e)."""
        return self.q.modulus // self.p_e.modulus

    @property
    def remainder(self) -> int:
        """q mod p_e, the rounding term every modular wrap of the slots adds."""
        return self.q.modulus % self.p_e.modulus

    @property
    def fresh_noise(self) -> int:
        return int(math.floor(self.tail * self.sigma))

    @property
    def decryption_threshold(self) -> float:
        """Decryption is exact while |noise| < delta/2 - remainder."""
        return self.delta / 2 - self.remainder

    @property
    def log_q(self) -> float:
        return math.log2(self.q.modulus)
