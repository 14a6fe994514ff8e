"""
Secret-key BFV-style encryption with additive and plaintext-multiplicative
homomorphism over packed slots.

    c0 = -a,  c1 = a*t + delta*m + e0        (mod q)
    decrypt:  round(p_e * (c0*t + c1) / q)   (mod p_e)
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from modfield import sample_gaussian_vector, sample_uniform
from utils.exceptions import DomainMismatch, GeometryMismatch, LengthMismatch, NoiseExhausted
from . import noise
from .ring import RingDomain, RingElem, negacyclic_intt, negacyclic_ntt, record_transforms
from .rlwe import RlweParams
from .slots import PlainVec, decode_slots, encode_slots

logger = logging.getLogger(__name__)


# Ring transforms over q

def _forward(values: np.ndarray, params: RlweParams, category: str, polys: int = 1) -> np.ndarray:
    record_transforms(category, polys)
    return negacyclic_ntt(values, params.psi, params.q)


def _inverse(values: np.ndarray, params: RlweParams, category: str, polys: int = 1) -> np.ndarray:
    record_transforms(category, polys)
    return negacyclic_intt(values, params.psi, params.q)


def _lift(values: np.ndarray, params: RlweParams) -> np.ndarray:
    """Signed integers into the q field's storage."""
    return params.q.array(np.asarray(values).astype(object))


# Keys

@dataclass(frozen=True, eq=False)
class SecretKey:
    """
    Attributes:
        t: Coefficient-domain secret with |t_i| <= tail * sigma
        t_hat: Evaluation-domain copy of t
    """

    t: RingElem
    t_hat: RingElem


def keygen(params: RlweParams, rng: np.random.Generator) -> SecretKey:
    """Sample a discrete-Gaussian secret key."""
    small = sample_gaussian_vector(params.sigma, params.n, rng, params.tail)
    t = _lift(small, params)
    t_hat = _forward(t, params, "keygen")
    return SecretKey(
        t=RingElem(t, RingDomain.COEFFICIENT, params.q.modulus),
        t_hat=RingElem(t_hat, RingDomain.EVALUATION, params.q.modulus),
    )


# Ciphertexts

@dataclass(frozen=True, eq=False)
class Ciphertext:
    """
    Pair (c0, c1) with a tracked worst-case noise bound.

    Attributes:
        c0: First ring element
        c1: Second ring element (same domain as c0)
        params: Parameters the ciphertext lives under
        noise_bound: Static bound on |c0*t + c1 - delta*m|
    """

    c0: RingElem
    c1: RingElem
    params: RlweParams = field(repr=False)
    noise_bound: int = 0

    def __post_init__(self):
        if self.c0.domain != self.c1.domain:
            raise DomainMismatch("Ciphertext components live in different domains")
        if self.c0.n != self.params.n or self.c1.n != self.params.n:
            raise LengthMismatch(f"Ciphertext components must have {self.params.n} coefficients")

    @property
    def domain(self) -> RingDomain:
        return self.c0.domain

    @property
    def noise_budget_bits(self) -> float:
        return noise.budget_bits(self.noise_bound, self.params.decryption_threshold)

    def _replace(self, c0: np.ndarray, c1: np.ndarray, bound: int,
                 domain: RingDomain | None = None) -> "Ciphertext":
        d = domain or self.domain
        q = self.params.q.modulus
        return Ciphertext(RingElem(c0, d, q), RingElem(c1, d, q), self.params, bound)


def _sample_mask_and_error(params: RlweParams, rng: np.random.Generator):
    a = sample_uniform(params.q, params.n, rng)
    e0 = sample_gaussian_vector(params.sigma, params.n, rng, params.tail)
    return a, _lift(e0, params)


def _scaled_message(m: PlainVec, params: RlweParams) -> np.ndarray:
    poly = encode_slots(m, params)
    return _lift(poly.coeffs, params) * params.delta % params.q.modulus


def encrypt(m: PlainVec, sk: SecretKey, params: RlweParams, rng: np.random.Generator) -> Ciphertext:
    """
    Encrypt a slot vector into a coefficient-domain ciphertext.

    Args:
        m: Plaintext slots
        sk: Secret key
        params: RLWE parameters
        rng: Generator supplying a and e0

    Returns:
        Fresh ciphertext with noise bound tail * sigma
    """
    q = params.q.modulus
    a, e0 = _sample_mask_and_error(params, rng)
    a_hat = _forward(a, params, "encrypt")
    a_t = _inverse(a_hat * sk.t_hat.coeffs % q, params, "encrypt")

    c0 = (-a) % q
    c1 = (a_t + _scaled_message(m, params) + e0) % q
    return Ciphertext(
        RingElem(c0, RingDomain.COEFFICIENT, q),
        RingElem(c1, RingDomain.COEFFICIENT, q),
        params,
        params.fresh_noise,
    )


def encrypt_freq_direct(freq_slots: PlainVec, sk: SecretKey, params: RlweParams,
                        rng: np.random.Generator) -> Ciphertext:
    """
    Encrypt straight into the evaluation domain.

    Consumes the generator exactly like encrypt, and the result equals
    to_evaluation_domain(encrypt(...)) without the two extra transforms.
    """
    q = params.q.modulus
    a, e0 = _sample_mask_and_error(params, rng)
    a_hat = _forward(a, params, "encrypt")
    body = _forward((_scaled_message(freq_slots, params) + e0) % q, params, "encrypt")

    c0 = (-a_hat) % q
    c1 = (a_hat * sk.t_hat.coeffs + body) % q
    return Ciphertext(
        RingElem(c0, RingDomain.EVALUATION, q),
        RingElem(c1, RingDomain.EVALUATION, q),
        params,
        params.fresh_noise,
    )


def _phase(ct: Ciphertext, sk: SecretKey) -> np.ndarray:
    """c0*t + c1 mod q in the coefficient domain."""
    params = ct.params
    q = params.q.modulus
    if ct.domain == RingDomain.EVALUATION:
        return _inverse((ct.c0.coeffs * sk.t_hat.coeffs + ct.c1.coeffs) % q, params, "decrypt")
    c0_hat = _forward(np.asarray(ct.c0.coeffs), params, "decrypt")
    c0_t = _inverse(c0_hat * sk.t_hat.coeffs % q, params, "decrypt")
    return (c0_t + ct.c1.coeffs) % q


def _round_to_plain(phase: np.ndarray, params: RlweParams) -> np.ndarray:
    q = params.q.modulus
    p = params.p_e.modulus
    scaled = (phase * p + q // 2) // q % p
    return params.p_e.array(scaled)


def decrypt(ct: Ciphertext, sk: SecretKey, params: RlweParams) -> PlainVec:
    """
    Decrypt a ciphertext in either domain.

    An evaluation-domain ciphertext costs one inverse transform; a
    coefficient-domain one costs two.
    """
    phase = _phase(ct, sk)
    poly = RingElem(_round_to_plain(phase, params), RingDomain.COEFFICIENT, params.p_e.modulus)
    return decode_slots(poly, params)


def measure_noise(ct: Ciphertext, sk: SecretKey) -> int:
    """
    Exact max |c0*t + c1 - delta*m| using the secret key (debugging and tests).
    """
    params = ct.params
    q = params.q.modulus
    phase = _phase(ct, sk)
    m = _round_to_plain(phase, params)
    residual = (phase - _lift(m, params) * params.delta) % q
    return int(np.max(np.abs(params.q.centered(residual))))


# Homomorphic operations

def _check_compatible(a: Ciphertext, b: Ciphertext):
    if a.domain != b.domain:
        raise DomainMismatch(f"Cannot add {a.domain.value} and {b.domain.value} ciphertexts")
    if a.params.q.modulus != b.params.q.modulus or a.params.n != b.params.n:
        raise GeometryMismatch("Ciphertexts were produced under different parameters")


def add_ct(a: Ciphertext, b: Ciphertext) -> Ciphertext:
    """
    Component-wise sum mod q.

    Raises:
        DomainMismatch: If the operands are in different domains
    """
    _check_compatible(a, b)
    q = a.params.q.modulus
    return a._replace(
        (a.c0.coeffs + b.c0.coeffs) % q,
        (a.c1.coeffs + b.c1.coeffs) % q,
        noise.add_bound(a.noise_bound, b.noise_bound, a.params.remainder),
    )


def add_plain(ct: Ciphertext, m: PlainVec, sign: int, params: RlweParams) -> Ciphertext:
    """
    Add (sign = +1) or subtract (sign = -1) a plaintext slot vector.
    """
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    q = params.q.modulus
    scaled = _scaled_message(m, params)
    if ct.domain == RingDomain.EVALUATION:
        scaled = _forward(scaled, params, "plaintext")
    return ct._replace(
        np.asarray(ct.c0.coeffs),
        (ct.c1.coeffs + sign * scaled) % q,
        noise.add_plain_bound(ct.noise_bound, params.remainder),
    )


@dataclass(frozen=True, eq=False)
class PlainOperand:
    """
    Plaintext multiplier prepared over q.

    Attributes:
        evaluations: Evaluation-domain values of the centered slot polynomial
        norm: max |centered coefficient|
    """

    evaluations: np.ndarray
    norm: int


def prepare_operand(w: PlainVec, params: RlweParams) -> PlainOperand:
    """Encode w, center its coefficients and move them to the evaluation domain over q."""
    poly = encode_slots(w, params)
    centered = params.p_e.centered(np.asarray(poly.coeffs))
    norm = int(np.max(np.abs(centered))) if len(centered) else 0
    evaluations = _forward(_lift(centered, params), params, "plaintext")
    return PlainOperand(evaluations=evaluations, norm=norm)


def mul_plain(ct: Ciphertext, w: Union[PlainVec, PlainOperand], params: RlweParams) -> Ciphertext:
    """
    Slot-wise product of the encrypted vector with a plaintext vector.

    An evaluation-domain ciphertext is multiplied pointwise with no transform;
    a coefficient-domain one goes through the evaluation domain and back.

    Raises:
        NoiseExhausted: If the tracked budget would drop to zero or below
    """
    op = w if isinstance(w, PlainOperand) else prepare_operand(w, params)
    bound = noise.mul_plain_bound(ct.noise_bound, op.norm, params.n, params.remainder)
    if not noise.within_budget(bound, params.decryption_threshold):
        bits = noise.budget_bits(bound, params.decryption_threshold)
        logger.warning(f"mul_plain refused: weight norm {op.norm} leaves {bits:.2f} bits")
        raise NoiseExhausted(f"mul_plain would leave {bits:.2f} bits of noise budget")

    q = params.q.modulus
    if ct.domain == RingDomain.EVALUATION:
        return ct._replace(ct.c0.coeffs * op.evaluations % q, ct.c1.coeffs * op.evaluations % q, bound)

    both = _forward(np.stack([ct.c0.coeffs, ct.c1.coeffs]), params, "ciphertext", polys=2)
    back = _inverse(both * op.evaluations % q, params, "ciphertext", polys=2)
    return ct._replace(back[0], back[1], bound)


# Domain changes

def to_evaluation_domain(x: Union[RingElem, Ciphertext], params: RlweParams):
    """
    Move a ring element or ciphertext into the evaluation domain.

    Ring elements mod p_e use psi_p; everything else uses psi over q.
    """
    if isinstance(x, Ciphertext):
        if x.domain == RingDomain.EVALUATION:
            return x
        both = _forward(np.stack([x.c0.coeffs, x.c1.coeffs]), params, "ciphertext", polys=2)
        return x._replace(both[0], both[1], x.noise_bound, RingDomain.EVALUATION)

    if x.domain == RingDomain.EVALUATION:
        return x
    if x.modulus == params.p_e.modulus:
        values = negacyclic_ntt(np.asarray(x.coeffs), params.psi_p, params.p_e)
    else:
        values = _forward(np.asarray(x.coeffs), params, "ciphertext")
    return x.with_coeffs(values, RingDomain.EVALUATION)


def to_coefficient_domain(x: Union[RingElem, Ciphertext], params: RlweParams):
    """Inverse of to_evaluation_domain."""
    if isinstance(x, Ciphertext):
        if x.domain == RingDomain.COEFFICIENT:
            return x
        both = _inverse(np.stack([x.c0.coeffs, x.c1.coeffs]), params, "ciphertext", polys=2)
        return x._replace(both[0], both[1], x.noise_bound, RingDomain.COEFFICIENT)

    if x.domain == RingDomain.COEFFICIENT:
        return x
    if x.modulus == params.p_e.modulus:
        values = negacyclic_intt(np.asarray(x.coeffs), params.psi_p, params.p_e)
    else:
        values = _inverse(np.asarray(x.coeffs), params, "ciphertext")
    return x.with_coeffs(values, RingDomain.COEFFICIENT)

