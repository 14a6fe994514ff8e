"""
Static worst-case noise bounds.

A ciphertext (c0, c1) satisfies c0*t + c1 = delta*m + v (mod q) with m in
[0, p_e); it decrypts exactly while |v| < delta/2 - (q mod p_e). Each rule below
returns a bound on |v| after one operation. The parameter selector sizes q
with the same rules, so a selected q always covers what ciphertexts track.
"""

import math


def add_bound(a: int, b: int, remainder: int) -> int:
    """Sum of two ciphertexts; a slot wrap past p_e costs one remainder."""
    return a + b + remainder


def add_plain_bound(a: int, remainder: int) -> int:
    return a + remainder


def mul_plain_bound(a: int, weight_norm: int, n: int, remainder: int) -> int:
    """
    Product with a plaintext polynomial whose centered coefficients are
    bounded by weight_norm.
    """
    spread = n * weight_norm
    return spread * a + remainder * (spread + 1)


def layer_bound(fresh: int, n: int, p_e: int, remainder: int, accumulation: int) -> int:
    """
    Worst case reaching hom_share in one convolution layer: a re-randomized
    input (fresh + hom_rec), one product with an arbitrary plaintext, summed
    over `accumulation` input channels, then the share subtraction.
    """
    product = mul_plain_bound(add_plain_bound(fresh, remainder), p_e // 2, n, remainder)
    total = product
    for _ in range(accumulation - 1):
        total = add_bound(total, product, remainder)
    return add_plain_bound(total, remainder)


def budget_bits(bound: int, threshold: float) -> float:
    """Remaining noise budget in bits; positive means decryption is exact."""
    if threshold <= 0:
        return -math.inf
    return math.log2(threshold) - math.log2(max(bound, 1))


def within_budget(bound: int, threshold: float) -> bool:
    return bound < threshold
