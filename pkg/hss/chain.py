"""
Moduli chain p_E >= p_A >= p_N and the split-moduli validator.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional

from modfield import FieldSpec, field_for
from utils.exceptions import ChainViolation, RangeViolation

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ModulusChain:
    """
    Attributes:
        p_n: Image transform modulus
        p_a: Share modulus
        p_e: Plaintext slot modulus
    """

    p_n: FieldSpec
    p_a: FieldSpec
    p_e: FieldSpec

    def __post_init__(self):
        if not self.p_e.modulus >= self.p_a.modulus >= self.p_n.modulus:
            raise ChainViolation(
                f"Chain needs p_E >= p_A >= p_N, got "
                f"{self.p_e.modulus} / {self.p_a.modulus} / {self.p_n.modulus}"
            )

    @classmethod
    def unified(cls, p: int) -> "ModulusChain":
        f = field_for(p)
        return cls(p_n=f, p_a=f, p_e=f)

    @classmethod
    def from_moduli(cls, p_n: int, p_a: int, p_e: int) -> "ModulusChain":
        return cls(p_n=field_for(p_n), p_a=field_for(p_a), p_e=field_for(p_e))

    @property
    def is_unified(self) -> bool:
        return self.p_n.modulus == self.p_a.modulus == self.p_e.modulus


@dataclass(frozen=True)
class ChainFinding:
    check: str
    passed: bool
    detail: str


def validate_chain(chain: ModulusChain, range_bound: Optional[int] = None) -> List[ChainFinding]:
    """
    Check the conditions under which split moduli compute u*w mod p_N exactly.

    Args:
        chain: Moduli chain
        range_bound: Optional dynamic-range lower bound on p_N

    Returns:
        One finding per condition
    """
    p_n, p_a, p_e = chain.p_n.modulus, chain.p_a.modulus, chain.p_e.modulus
    findings = [
        ChainFinding(
            "slot_no_wrap",
            chain.is_unified or (p_n - 1) ** 2 < p_e,
            f"(p_N - 1)^2 = {(p_n - 1) ** 2} vs p_E = {p_e}",
        ),
        ChainFinding(
            "share_commutes",
            p_a == p_n,
            f"p_A = {p_a}, p_N = {p_n}",
        ),
    ]
    if range_bound is not None:
        findings.append(
            ChainFinding("dynamic_range", p_n >= range_bound, f"p_N = {p_n} vs bound {range_bound}")
        )
    return findings


def require_valid_chain(chain: ModulusChain, range_bound: Optional[int] = None):
    """
    Raises:
        RangeViolation: If any validate_chain finding fails
    """
    failed = [f for f in validate_chain(chain, range_bound) if not f.passed]
    if failed:
        summary = "; ".join(f"{f.check}: {f.detail}" for f in failed)
        logger.error(f"Moduli chain rejected: {summary}")
        raise RangeViolation(f"Moduli chain rejected: {summary}")
