"""
SIMD slot packing: a vector of n plaintext slots mod p_e is the evaluation of a
polynomial at the odd powers of psi_p.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from utils.exceptions import LengthMismatch
from .ring import RingDomain, RingElem, negacyclic_intt, negacyclic_ntt
from .rlwe import RlweParams


@dataclass(frozen=True, eq=False)
class PlainVec:
    """n residues mod p_e, one per slot."""

    slots: np.ndarray

    def __post_init__(self):
        self.slots.setflags(write=False)

    @classmethod
    def from_values(cls, values, params: RlweParams) -> "PlainVec":
        """Reduce arbitrary (possibly signed) integers into a slot vector."""
        arr = params.p_e.array(values)
        if arr.shape != (params.n,):
            raise LengthMismatch(f"Expected {params.n} slots, got shape {arr.shape}")
        return cls(arr.copy())

    @classmethod
    def zeros(cls, params: RlweParams) -> "PlainVec":
        return cls(params.p_e.zeros(params.n))

    def __len__(self) -> int:
        return self.slots.shape[0]


def _check_length(length: int, params: RlweParams):
    if length != params.n:
        raise LengthMismatch(f"Expected {params.n} slots, got {length}")


def encode_slots(v: PlainVec, params: RlweParams) -> RingElem:
    """
    Polynomial m over p_e with m(psi_p^(2i+1)) = v_i.

    Returns:
        Coefficient-domain RingElem mod p_e
    """
    _check_length(len(v), params)
    coeffs = negacyclic_intt(v.slots, params.psi_p, params.p_e)
    return RingElem(coeffs, RingDomain.COEFFICIENT, params.p_e.modulus)


def decode_slots(m: RingElem, params: RlweParams) -> PlainVec:
    """Exact inverse of encode_slots."""
    _check_length(m.n, params)
    return PlainVec(negacyclic_ntt(np.asarray(m.coeffs), params.psi_p, params.p_e))
