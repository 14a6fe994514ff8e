"""Tests for homomorphic secret sharing and the moduli chain."""

import numpy as np
import pytest
from scipy.stats import chisquare

from hss import ModulusChain, hom_rec, hom_share, recombine_clear, require_valid_chain, split_clear, validate_chain
from modfield import make_rng
from ntt import (
    ConvGeometry,
    ConvType,
    conv_oracle,
    crop_output,
    flatten_blocks,
    intt_2d,
    ntt_2d,
    pad_filter,
    pad_image,
    unflatten_blocks,
)
from ringbfv import (
    PlainVec,
    decrypt,
    encrypt,
    encrypt_freq_direct,
    keygen,
    mul_plain,
    to_evaluation_domain,
)
from utils.exceptions import ChainViolation, LengthMismatch, RangeViolation


@pytest.fixture
def setup(toy_params):
    rlwe = toy_params.rlwe
    sk = keygen(rlwe, make_rng(1))
    return toy_params.chain, rlwe, sk


def _share_of(setup, y, seed, zero_mask=False, evaluation=False):
    chain, rlwe, sk = setup
    ct = encrypt(PlainVec.from_values(y, rlwe), sk, rlwe, make_rng(seed, 0))
    if evaluation:
        ct = to_evaluation_domain(ct, rlwe)
    pair = hom_share(ct, chain, rlwe, make_rng(seed, 1), zero_mask=zero_mask)
    s_a = decrypt(pair.alice_ct, sk, rlwe).slots % chain.p_a.modulus
    return s_a, pair


def test_zero_mask_gives_alice_the_value(setup, rng):
    y = rng.integers(0, 1153, size=16)
    s_a, pair = _share_of(setup, y, 3, zero_mask=True)
    assert s_a.tolist() == y.tolist()
    assert not np.any(pair.bob_share.slots)


@pytest.mark.parametrize("evaluation", [False, True])
def test_shares_recombine(setup, rng, evaluation):
    chain = setup[0]
    for seed in range(10):
        y = rng.integers(0, 1153, size=16)
        s_a, pair = _share_of(setup, y, seed, evaluation=evaluation)
        assert recombine_clear(s_a, pair.bob_share.slots, chain.p_a).tolist() == y.tolist()


def test_alice_share_is_uniform(setup):
    p = 1153
    y = np.arange(16) * 70
    shares = np.concatenate([_share_of(setup, y, seed)[0] for seed in range(640)])
    bins = shares * 16 // p
    observed = np.bincount(bins, minlength=16)
    expected = np.bincount(np.arange(p) * 16 // p, minlength=16) * len(shares) / p
    assert chisquare(observed, expected).pvalue > 1e-4


def test_hom_rec_restores_value(setup, rng):
    chain, rlwe, sk = setup
    y = rng.integers(0, 1153, size=16)
    s_a, pair = _share_of(setup, y, 9)
    rebuilt = hom_rec(encrypt(PlainVec.from_values(s_a, rlwe), sk, rlwe, make_rng(99)),
                      pair.bob_share, chain, rlwe)
    assert decrypt(rebuilt, sk, rlwe).slots.tolist() == y.tolist()


def test_chain_order_enforced():
    with pytest.raises(ChainViolation):
        ModulusChain.from_moduli(12289, 2311, 12289)
    assert ModulusChain.unified(12289).is_unified


def test_split_chain_findings():
    chain = ModulusChain.from_moduli(2311, 12289, 12289)
    findings = {f.check: f.passed for f in validate_chain(chain, 2304)}
    assert findings == {"slot_no_wrap": False, "share_commutes": False, "dynamic_range": True}
    with pytest.raises(RangeViolation):
        require_valid_chain(chain)


def test_unified_chain_passes():
    assert all(f.passed for f in validate_chain(ModulusChain.unified(40961), 36864))
    require_valid_chain(ModulusChain.unified(40961), 36864)


def test_split_clear_recombines(f12289, rng):
    y = rng.integers(0, 12289, size=(3, 5))
    s_a, s_b = split_clear(y, f12289, make_rng(4))
    assert np.array_equal(recombine_clear(s_a, s_b, f12289), y)


def test_recombine_rejects_shape_mismatch(f12289):
    with pytest.raises(LengthMismatch):
        recombine_clear(np.zeros(4), np.zeros(5), f12289)


# Medium parameters

@pytest.fixture(scope="module")
def medium_setup(medium_params):
    rlwe = medium_params.rlwe
    return medium_params.chain, rlwe, keygen(rlwe, make_rng(11))


@pytest.mark.slow
def test_share_then_rec_is_identity_at_medium(medium_setup):
    chain, rlwe, sk = medium_setup
    rng = np.random.default_rng(5)
    for seed in range(1000):
        y = PlainVec.from_values(rng.integers(0, rlwe.p_e.modulus, size=rlwe.n), rlwe)
        ct = encrypt(y, sk, rlwe, make_rng(seed, 0))
        pair = hom_share(ct, chain, rlwe, make_rng(seed, 1))
        back = hom_rec(pair.alice_ct, pair.bob_share, chain, rlwe)
        assert np.array_equal(decrypt(back, sk, rlwe).slots, y.slots), f"seed {seed}"


@pytest.mark.slow
def test_chained_share_rec_rounds_at_medium(medium_setup):
    chain, rlwe, sk = medium_setup
    y = PlainVec.from_values(np.random.default_rng(6).integers(0, rlwe.p_e.modulus, size=rlwe.n), rlwe)
    ct = encrypt(y, sk, rlwe, make_rng(1))
    for round_index in range(5):
        pair = hom_share(ct, chain, rlwe, make_rng(2, round_index))
        ct = hom_rec(pair.alice_ct, pair.bob_share, chain, rlwe)
    assert ct.noise_budget_bits > 0
    assert np.array_equal(decrypt(ct, sk, rlwe).slots, y.slots)


@pytest.mark.slow
def test_inverse_transform_of_shares_gives_convolution(medium_setup):
    chain, rlwe, sk = medium_setup
    f = chain.p_n
    p = f.modulus
    g = ConvGeometry.plan(8, 8, 3, 3, ConvType.SAME, f)
    rng = np.random.default_rng(7)
    for seed in range(100):
        u = rng.integers(-255, 256, size=(8, 8))
        k = rng.integers(-15, 16, size=(3, 3))
        u_hat = flatten_blocks(ntt_2d(pad_image(u, g, f)), rlwe.n)[0]
        w_hat = flatten_blocks(ntt_2d(pad_filter(k, g, f)), rlwe.n)[0]

        ct = encrypt_freq_direct(PlainVec.from_values(u_hat, rlwe), sk, rlwe, make_rng(seed, 0))
        product = mul_plain(ct, PlainVec.from_values(w_hat, rlwe), rlwe)
        pair = hom_share(product, chain, rlwe, make_rng(seed, 1))

        s_a_hat = decrypt(pair.alice_ct, sk, rlwe).slots % chain.p_a.modulus
        s_a = intt_2d(unflatten_blocks([s_a_hat], g.padded_h, g.padded_w, f)).matrix
        s_b = intt_2d(unflatten_blocks([pair.bob_share.slots], g.padded_h, g.padded_w, f)).matrix
        assert np.array_equal(crop_output((s_a + s_b) % p, g), conv_oracle(u, k, g, f)), f"seed {seed}"
