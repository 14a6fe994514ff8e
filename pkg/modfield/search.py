"""
Prime and root-of-unity discovery.
"""

import logging

import sympy

from utils.exceptions import OrderNotDividing, SearchExhausted
from .field import MODULUS_CEILING, FieldSpec, is_prime, pow_mod

logger = logging.getLogger(__name__)


def find_root_of_unity(order: int, f: FieldSpec) -> int:
    """
    Canonical primitive root of unity of the given order.

    Derived from the field generator as g^((p-1)/order), so the result is
    deterministic for a given field.

    Args:
        order: Positive order dividing p - 1
        f: Field context

    Returns:
        omega with omega^order = 1 and no smaller positive power equal to 1

    Raises:
        OrderNotDividing: If order does not divide p - 1
    """
    if order <= 0 or (f.modulus - 1) % order != 0:
        raise OrderNotDividing(f"Order {order} does not divide p - 1 = {f.modulus - 1}")
    return pow_mod(f.generator, (f.modulus - 1) // order, f)


def is_primitive_root_of_unity(omega: int, order: int, f: FieldSpec) -> bool:
    """Check that omega has multiplicative order exactly `order`."""
    if order <= 0 or pow_mod(omega, order, f) != 1:
        return False
    return all(pow_mod(omega, order // ell, f) != 1 for ell in sympy.primefactors(order))


def find_prime(min_value: int, residue: int = 1, modulus: int = 1) -> int:
    """
    Smallest prime >= min_value congruent to residue mod modulus.

    Args:
        min_value: Lower bound (inclusive)
        residue: Required residue
        modulus: Congruence modulus

    Returns:
        The prime

    Raises:
        SearchExhausted: If no such prime exists below 2^62
    """
    start = max(min_value, 2)
    candidate = start + ((residue - start) % modulus)

    while candidate < MODULUS_CEILING:
        if is_prime(candidate):
            logger.debug(f"find_prime(>= {min_value}, {residue} mod {modulus}) -> {candidate}")
            return candidate
        candidate += modulus

    raise SearchExhausted(
        f"No prime >= {min_value} with p = {residue} mod {modulus} below 2^62"
    )
