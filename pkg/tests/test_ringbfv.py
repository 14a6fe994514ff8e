"""Tests for the packed BFV-style scheme on the toy parameters."""

import dataclasses

import numpy as np
import pytest

from modfield import field_for, find_root_of_unity, make_rng
from ringbfv import (
    PlainVec,
    RingDomain,
    RlweParams,
    add_ct,
    add_plain,
    count_transforms,
    decrypt,
    encode_slots,
    decode_slots,
    encrypt,
    encrypt_freq_direct,
    keygen,
    measure_noise,
    mul_plain,
    negacyclic_convolution_oracle,
    negacyclic_intt,
    negacyclic_ntt,
    prepare_operand,
    to_coefficient_domain,
    to_evaluation_domain,
)
from utils.exceptions import DomainMismatch, LengthMismatch, NoiseExhausted, ParameterError


@pytest.fixture
def rlwe(toy_params):
    return toy_params.rlwe


@pytest.fixture
def sk(rlwe):
    return keygen(rlwe, make_rng(1))


def _random_slots(rlwe, rng):
    return PlainVec.from_values(rng.integers(0, rlwe.p_e.modulus, size=rlwe.n), rlwe)


def test_toy_parameters(rlwe):
    assert rlwe.n == 16
    assert rlwe.p_e.modulus == 1153
    assert (rlwe.q.modulus - 1) % (2 * 16 * 1153) == 0
    assert rlwe.decryption_threshold > rlwe.fresh_noise


def test_rejects_tiny_q():
    with pytest.raises(ParameterError):
        RlweParams.create(16, 1153, 1153)


def test_negacyclic_transform_matches_oracle(rng, f12289):
    psi = find_root_of_unity(32, f12289)
    for _ in range(20):
        a = rng.integers(0, 12289, size=16)
        b = rng.integers(0, 12289, size=16)
        prod = negacyclic_ntt(a, psi, f12289) * negacyclic_ntt(b, psi, f12289) % 12289
        got = negacyclic_intt(prod, psi, f12289)
        assert got.tolist() == negacyclic_convolution_oracle(a, b, 12289)


def test_slot_encoding_round_trip(rlwe, rng):
    v = _random_slots(rlwe, rng)
    assert np.array_equal(decode_slots(encode_slots(v, rlwe), rlwe).slots, v.slots)


def test_constant_slots_encode_to_constant_polynomial(rlwe):
    poly = encode_slots(PlainVec.from_values([7] * 16, rlwe), rlwe)
    assert poly.coeffs.tolist() == [7] + [0] * 15


def test_slot_vector_length_checked(rlwe):
    with pytest.raises(LengthMismatch):
        PlainVec.from_values([1, 2, 3], rlwe)


def test_encrypt_decrypt_round_trip(rlwe, sk, rng):
    for seed in range(10):
        m = _random_slots(rlwe, rng)
        ct = encrypt(m, sk, rlwe, make_rng(seed))
        assert ct.domain == RingDomain.COEFFICIENT
        assert np.array_equal(decrypt(ct, sk, rlwe).slots, m.slots)
        assert measure_noise(ct, sk) <= ct.noise_bound


def test_freq_direct_equals_transformed_encryption(rlwe, sk, rng):
    m = _random_slots(rlwe, rng)
    direct = encrypt_freq_direct(m, sk, rlwe, make_rng(5))
    baseline = to_evaluation_domain(encrypt(m, sk, rlwe, make_rng(5)), rlwe)
    assert direct.domain == RingDomain.EVALUATION
    assert np.array_equal(direct.c0.coeffs, baseline.c0.coeffs)
    assert np.array_equal(direct.c1.coeffs, baseline.c1.coeffs)
    assert np.array_equal(decrypt(direct, sk, rlwe).slots, m.slots)


def test_domain_round_trip(rlwe, sk, rng):
    ct = encrypt(_random_slots(rlwe, rng), sk, rlwe, make_rng(2))
    back = to_coefficient_domain(to_evaluation_domain(ct, rlwe), rlwe)
    assert np.array_equal(back.c0.coeffs, ct.c0.coeffs)
    assert np.array_equal(back.c1.coeffs, ct.c1.coeffs)


@pytest.mark.parametrize("evaluation", [False, True])
def test_homomorphic_operations(rlwe, sk, rng, evaluation):
    p = rlwe.p_e.modulus
    a = _random_slots(rlwe, rng)
    b = _random_slots(rlwe, rng)
    w = _random_slots(rlwe, rng)
    ct_a = encrypt(a, sk, rlwe, make_rng(10))
    ct_b = encrypt(b, sk, rlwe, make_rng(11))
    if evaluation:
        ct_a = to_evaluation_domain(ct_a, rlwe)
        ct_b = to_evaluation_domain(ct_b, rlwe)

    summed = add_ct(ct_a, ct_b)
    assert decrypt(summed, sk, rlwe).slots.tolist() == ((a.slots + b.slots) % p).tolist()

    shifted = add_plain(ct_a, b, -1, rlwe)
    assert decrypt(shifted, sk, rlwe).slots.tolist() == ((a.slots - b.slots) % p).tolist()

    product = mul_plain(ct_a, w, rlwe)
    assert product.domain == ct_a.domain
    assert decrypt(product, sk, rlwe).slots.tolist() == (a.slots * w.slots % p).tolist()
    assert measure_noise(product, sk) <= product.noise_bound


def test_prepared_operand_matches_plain_vector(rlwe, sk, rng):
    w = _random_slots(rlwe, rng)
    ct = to_evaluation_domain(encrypt(_random_slots(rlwe, rng), sk, rlwe, make_rng(3)), rlwe)
    direct = mul_plain(ct, w, rlwe)
    prepared = mul_plain(ct, prepare_operand(w, rlwe), rlwe)
    assert np.array_equal(direct.c1.coeffs, prepared.c1.coeffs)


def test_add_plain_rejects_bad_sign(rlwe, sk, rng):
    ct = encrypt(_random_slots(rlwe, rng), sk, rlwe, make_rng(3))
    with pytest.raises(ValueError):
        add_plain(ct, PlainVec.zeros(rlwe), 2, rlwe)


def test_add_ct_domain_mismatch(rlwe, sk, rng):
    ct = encrypt(_random_slots(rlwe, rng), sk, rlwe, make_rng(4))
    with pytest.raises(DomainMismatch):
        add_ct(ct, to_evaluation_domain(ct, rlwe))


def test_mul_plain_refuses_exhausted_budget(rlwe, sk, rng):
    ct = encrypt(_random_slots(rlwe, rng), sk, rlwe, make_rng(4))
    tired = dataclasses.replace(ct, noise_bound=rlwe.q.modulus)
    with pytest.raises(NoiseExhausted):
        mul_plain(tired, _random_slots(rlwe, rng), rlwe)


def test_noise_budget_positive_when_fresh(rlwe, sk, rng):
    ct = encrypt(_random_slots(rlwe, rng), sk, rlwe, make_rng(6))
    assert ct.noise_budget_bits > 0


def test_transform_counts(rlwe, sk, rng):
    m = _random_slots(rlwe, rng)
    with count_transforms() as counts:
        ct = encrypt(m, sk, rlwe, make_rng(7))
    assert counts == {"encrypt": 2}

    with count_transforms() as counts:
        direct = encrypt_freq_direct(m, sk, rlwe, make_rng(7))
    assert counts == {"encrypt": 2}

    with count_transforms() as counts:
        decrypt(ct, sk, rlwe)
    assert counts == {"decrypt": 2}

    with count_transforms() as counts:
        decrypt(direct, sk, rlwe)
    assert counts == {"decrypt": 1}

    with count_transforms() as counts:
        evaluated = to_evaluation_domain(ct, rlwe)
    assert counts == {"ciphertext": 2}

    with count_transforms() as counts:
        add_plain(evaluated, m, 1, rlwe)
        mul_plain(evaluated, prepare_operand(m, rlwe), rlwe)
    assert counts == {"plaintext": 2}


def test_nested_counters_see_everything(rlwe, sk, rng):
    with count_transforms() as outer:
        with count_transforms() as inner:
            encrypt(_random_slots(rlwe, rng), sk, rlwe, make_rng(8))
    assert inner == outer == {"encrypt": 2}


def test_plaintext_ring_elements_use_plaintext_root(rlwe, rng):
    poly = encode_slots(_random_slots(rlwe, rng), rlwe)
    evaluated = to_evaluation_domain(poly, rlwe)
    assert evaluated.modulus == field_for(1153).modulus
    assert np.array_equal(to_coefficient_domain(evaluated, rlwe).coeffs, poly.coeffs)


def test_keygen_and_encrypt_are_deterministic_under_seed(rlwe, rng):
    first, second = keygen(rlwe, make_rng(7)), keygen(rlwe, make_rng(7))
    assert np.array_equal(first.t.coeffs, second.t.coeffs)
    assert not np.array_equal(first.t.coeffs, keygen(rlwe, make_rng(8)).t.coeffs)

    m = _random_slots(rlwe, rng)
    a = encrypt(m, first, rlwe, make_rng(3))
    b = encrypt(m, second, rlwe, make_rng(3))
    assert np.array_equal(a.c0.coeffs, b.c0.coeffs)
    assert np.array_equal(a.c1.coeffs, b.c1.coeffs)


@pytest.mark.slow
def test_medium_gauntlet(medium_params, rng):
    rlwe = medium_params.rlwe
    p = rlwe.p_e.modulus
    sk = keygen(rlwe, make_rng(100))
    for cycle in range(1000):
        m1, m2, w1, w2 = (_random_slots(rlwe, rng) for _ in range(4))
        ct1 = encrypt(m1, sk, rlwe, make_rng(cycle, 1))
        ct2 = encrypt_freq_direct(m2, sk, rlwe, make_rng(cycle, 2))
        assert np.array_equal(decrypt(ct1, sk, rlwe).slots, m1.slots)
        assert np.array_equal(decrypt(ct2, sk, rlwe).slots, m2.slots)

        summed = add_ct(to_evaluation_domain(ct1, rlwe), ct2)
        assert np.array_equal(decrypt(summed, sk, rlwe).slots, (m1.slots + m2.slots) % p)

        mixed = add_ct(to_evaluation_domain(mul_plain(ct1, w1, rlwe), rlwe), mul_plain(ct2, w2, rlwe))
        expected = (m1.slots * w1.slots + m2.slots * w2.slots) % p
        assert np.array_equal(decrypt(mixed, sk, rlwe).slots, expected), f"cycle {cycle}"
