"""End-to-end tests of the two-party convolution protocol."""

from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
import pytest

from modfield import field_for, make_rng
from ntt import ConvType
from protocol import (
    ALICE_SENDS,
    BOB_SENDS,
    ActivationFn,
    EncryptMode,
    Role,
    alice_begin_layer,
    alice_setup,
    apply_activation,
    bob_filter,
    bob_setup,
    load_image_file,
    load_schedule,
    load_weights_file,
    plaintext_pipeline,
    plan_layers,
    run_inference,
    run_two_party,
    seeded_image,
    seeded_weights,
    session_digest,
    trusted_activation,
)
from tests.conftest import single_conv
from utils.exceptions import DigestMismatch, GeometryMismatch, ProtocolOrderViolation, RangeOverflow
from wire import SENT, Frame, InProcTransport, MessageType

DEMO = Path(__file__).resolve().parent.parent / "demo"


def _expected(schedule, params, seed, image=None, weights=None):
    plans = plan_layers(schedule, params.chain.p_n, params.rlwe.n)
    if image is None:
        image = seeded_image(schedule, seed, params.profile.input_bits)
    if weights is None:
        weights = seeded_weights(plans, seed, params.profile.filter_bits)
    return plaintext_pipeline(plans, weights, image, params.chain.p_n)


def _online(*results):
    return sum(r.online_transforms() for r in results)


# Correctness

@pytest.mark.parametrize("mode", [EncryptMode.BASELINE, EncryptMode.FREQ_DIRECT])
def test_single_conv_matches_plaintext(toy_params, mode):
    schedule = load_schedule(DEMO / "schedules" / "toy_8x8_3x3.toml")
    alice, bob = run_two_party(schedule, toy_params, mode=mode, seed=3)
    assert alice.role == Role.ALICE
    assert bob.output is None
    assert np.array_equal(alice.output, _expected(schedule, toy_params, 3))


@pytest.mark.parametrize("conv_type", [ConvType.SAME, ConvType.VALID])
def test_multichannel_conv(toy_params, conv_type):
    schedule = single_conv(6, 6, 3, 3, conv_type, channels=2, channels_out=3)
    alice, _ = run_two_party(schedule, toy_params, mode=EncryptMode.FREQ_DIRECT, seed=5)
    expected_shape = (3, 6, 6) if conv_type == ConvType.SAME else (3, 4, 4)
    assert alice.output.shape == expected_shape
    assert np.array_equal(alice.output, _expected(schedule, toy_params, 5))


@pytest.mark.parametrize("mode", [EncryptMode.BASELINE, EncryptMode.FREQ_DIRECT])
def test_two_layer_relu(toy_params, mode):
    schedule = load_schedule(DEMO / "schedules" / "two_layer_relu.toml")
    alice, _ = run_two_party(schedule, toy_params, mode=mode, seed=11)
    expected = _expected(schedule, toy_params, 11)
    assert np.array_equal(alice.output, expected)
    assert np.all(alice.output >= 0)


def test_two_layer_square_with_small_values(toy_params):
    schedule = load_schedule(DEMO / "schedules" / "two_layer_square.toml")
    plans = plan_layers(schedule, toy_params.chain.p_n, toy_params.rlwe.n)
    rng = np.random.default_rng(1)
    image = rng.integers(-1, 2, size=(1, 6, 6))
    weights = [rng.integers(-1, 2, size=plan.weight_shape) for plan in plans]
    alice, _ = run_two_party(schedule, toy_params, image=image, weights=weights, seed=2)
    assert alice.output.shape == (1, 2, 2)
    assert np.array_equal(alice.output, _expected(schedule, toy_params, 2, image, weights))


def test_identity_network_returns_input(toy_params):
    schedule = load_schedule(DEMO / "schedules" / "toy_8x8_3x3.toml")
    plans = plan_layers(schedule, toy_params.chain.p_n, toy_params.rlwe.n)
    image = load_image_file(DEMO / "data" / "image_8x8.txt", schedule)
    weights = load_weights_file(DEMO / "data" / "identity_3x3.txt", plans)
    alice, _ = run_two_party(schedule, toy_params, image=image, weights=weights, seed=4)
    assert np.array_equal(alice.output, image)


@pytest.mark.slow
@pytest.mark.parametrize("mode", [EncryptMode.BASELINE, EncryptMode.FREQ_DIRECT])
@pytest.mark.parametrize("h, w, fh, fw, blocks", [(8, 8, 3, 3, 1), (28, 28, 5, 5, 1), (32, 32, 3, 3, 2)])
def test_medium_preset_matches_oracle(medium_params, mode, h, w, fh, fw, blocks):
    schedule = single_conv(h, w, fh, fw)
    assert plan_layers(schedule, medium_params.chain.p_n, medium_params.rlwe.n)[0].blocks == blocks
    for seed in range(100):
        alice, bob = run_two_party(schedule, medium_params, mode=mode, seed=seed)
        assert np.array_equal(alice.output, _expected(schedule, medium_params, seed)), f"seed {seed}"
    expected_counts = {"plaintext": blocks}
    if mode == EncryptMode.BASELINE:
        expected_counts["ciphertext"] = 2 * blocks
    assert bob.transform_counts["filter"] == expected_counts


# Transform counts

def test_freq_direct_saves_two_transforms_per_block(toy_params):
    schedule = load_schedule(DEMO / "schedules" / "toy_8x8_3x3.toml")
    blocks = plan_layers(schedule, toy_params.chain.p_n, toy_params.rlwe.n)[0].blocks
    assert blocks == 16

    baseline = run_two_party(schedule, toy_params, mode=EncryptMode.BASELINE, seed=1)
    direct = run_two_party(schedule, toy_params, mode=EncryptMode.FREQ_DIRECT, seed=1)
    assert _online(*baseline) - _online(*direct) == 2 * blocks
    assert baseline[1].transform_counts["filter"]["ciphertext"] == 2 * blocks
    assert "ciphertext" not in direct[1].transform_counts["filter"]


def test_single_block_counts(toy_params):
    schedule = single_conv(2, 2, 3, 3)
    baseline = run_two_party(schedule, toy_params, mode=EncryptMode.BASELINE, seed=1)
    direct = run_two_party(schedule, toy_params, mode=EncryptMode.FREQ_DIRECT, seed=1)
    assert _online(*baseline) == 6
    assert _online(*direct) == 4


def test_online_counts_do_not_depend_on_filter_size(toy_params):
    small = run_two_party(single_conv(12, 12, 3, 3), toy_params, mode=EncryptMode.FREQ_DIRECT, seed=1)
    large = run_two_party(single_conv(12, 12, 5, 5), toy_params, mode=EncryptMode.FREQ_DIRECT, seed=1)
    assert small[1].online_transforms() == large[1].online_transforms()
    assert _online(*small) == _online(*large)


def test_setup_is_excluded_from_online_counts(toy_params):
    _, bob = run_two_party(single_conv(2, 2, 3, 3), toy_params, seed=1)
    assert bob.transform_counts["setup"] == {"plaintext": 1}
    assert bob.online_transforms() == 3


# Transcripts and ordering

def test_only_whitelisted_frames_are_sent(toy_params):
    schedule = load_schedule(DEMO / "schedules" / "two_layer_relu.toml")
    alice, bob = run_two_party(schedule, toy_params, seed=8)
    for result, allowed in ((alice, ALICE_SENDS), (bob, BOB_SENDS)):
        sent = {e.msg_type for e in result.transcript.entries if e.direction == SENT}
        assert sent <= allowed
    assert MessageType.ALICE_SHARE_CIPHERTEXTS not in ALICE_SENDS
    assert MessageType.CIPHERTEXT_BLOCKS not in BOB_SENDS


def test_runs_are_deterministic(toy_params):
    schedule = single_conv(8, 8, 3, 3)
    first = run_two_party(schedule, toy_params, seed=21)
    second = run_two_party(schedule, toy_params, seed=21)
    assert np.array_equal(first[0].output, second[0].output)
    assert first[0].transcript.signature() == second[0].transcript.signature()


def test_tcp_matches_inproc(toy_params):
    schedule = load_schedule(DEMO / "schedules" / "two_layer_relu.toml")
    local = run_two_party(schedule, toy_params, seed=6, transport="inproc")
    remote = run_two_party(schedule, toy_params, seed=6, transport="tcp", timeout=10)
    assert np.array_equal(local[0].output, remote[0].output)
    assert local[0].transcript.signature() == remote[0].transcript.signature()
    assert local[1].transcript.signature() == remote[1].transcript.signature()


def test_unknown_transport(toy_params):
    with pytest.raises(ValueError):
        run_two_party(single_conv(2, 2, 3, 3), toy_params, transport="carrier-pigeon")


def test_digest_mismatch_aborts_both_parties(toy_params):
    schedule = single_conv(4, 4, 3, 3)
    alice_end, bob_end = InProcTransport.pair(timeout=5)
    with ThreadPoolExecutor(max_workers=2) as pool:
        bob = pool.submit(run_inference, Role.BOB, schedule, bob_end, toy_params, seed=2)
        alice = pool.submit(run_inference, Role.ALICE, schedule, alice_end, toy_params, seed=1)
        with pytest.raises(DigestMismatch):
            bob.result(timeout=30)
        with pytest.raises(DigestMismatch):
            alice.result(timeout=30)


def test_digest_covers_mode_and_seed(toy_params):
    schedule = single_conv(4, 4, 3, 3)
    base = session_digest(toy_params, schedule, EncryptMode.BASELINE, 1)
    assert base == session_digest(toy_params, schedule, EncryptMode.BASELINE, 1)
    assert base != session_digest(toy_params, schedule, EncryptMode.FREQ_DIRECT, 1)
    assert base != session_digest(toy_params, schedule, EncryptMode.BASELINE, 2)
    assert base != session_digest(toy_params, single_conv(4, 4, 5, 5), EncryptMode.BASELINE, 1)


def test_out_of_order_messages(toy_params):
    schedule = single_conv(4, 4, 3, 3)
    plans = plan_layers(schedule, toy_params.chain.p_n, toy_params.rlwe.n)
    weights = seeded_weights(plans, 1, toy_params.profile.filter_bits)
    digest = session_digest(toy_params, schedule, EncryptMode.BASELINE, 1)

    bob = bob_setup(toy_params, plans, weights, EncryptMode.BASELINE, digest, 1)
    with pytest.raises(ProtocolOrderViolation):
        bob_filter(bob, Frame(MessageType.CIPHERTEXT_BLOCKS, b""))

    alice = alice_setup(toy_params, plans, EncryptMode.BASELINE, digest, 1)
    with pytest.raises(ProtocolOrderViolation):
        alice_begin_layer(alice, np.zeros((1, 4, 4), dtype=np.int64))


def test_wrong_image_shape(toy_params):
    schedule = single_conv(4, 4, 3, 3)
    with pytest.raises(GeometryMismatch):
        run_two_party(schedule, toy_params, image=np.zeros((1, 5, 5), dtype=np.int64), timeout=5)


# Activations

def test_apply_activation(f17):
    values = f17.array([-3, -1, 0, 2, 4])
    assert f17.centered(apply_activation(values, ActivationFn.RELU, f17)).tolist() == [0, 0, 0, 2, 4]
    small = f17.array([-2, -1, 0, 2])
    assert apply_activation(small, ActivationFn.SQUARE, f17).tolist() == [4, 1, 0, 4]
    with pytest.raises(RangeOverflow):
        apply_activation(values, ActivationFn.SQUARE, f17)
    assert np.array_equal(apply_activation(values, ActivationFn.IDENTITY, f17), values)


def test_trusted_activation_reshares(f12289):
    y = np.array([[-5, 3], [0, 7]])
    s_a = make_rng(1).integers(0, 12289, size=(2, 2))
    s_b = (f12289.array(y) - s_a) % 12289
    a2, b2 = trusted_activation(s_a, s_b, ActivationFn.RELU, f12289, make_rng(2))
    assert f12289.centered((a2 + b2) % 12289).tolist() == [[0, 3], [0, 7]]
    assert not np.array_equal(a2, s_a)


def test_square_at_range_edge():
    f = field_for(1153)
    assert apply_activation([24], ActivationFn.SQUARE, f).tolist() == [576]
