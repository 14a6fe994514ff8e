"""
Alice and Bob protocol steps.

Every step checks the party's phase and the incoming message type, performs
one round of the convolution protocol and returns what must be sent next.
"""

from __future__ import annotations

import logging
import time
from contextlib import contextmanager
from typing import List

import numpy as np

from hss import hom_rec, hom_share, recombine_clear
from modfield import make_rng
from ntt import crop_output, flatten_blocks, intt_2d, ntt_2d, pad_filter, pad_image, unflatten_blocks
from params import ParamSet
from ringbfv import (
    PlainVec,
    add_ct,
    count_transforms,
    decrypt,
    encrypt,
    encrypt_freq_direct,
    keygen,
    mul_plain,
    prepare_operand,
    to_evaluation_domain,
)
from utils.exceptions import (
    DigestMismatch,
    GeometryMismatch,
    MalformedPayload,
    ProtocolError,
    ProtocolOrderViolation,
)
from wire import (
    Frame,
    MessageType,
    decode_digest,
    decode_error,
    deserialize_ciphertexts,
    deserialize_share_tensor,
    encode_digest,
    serialize_ciphertexts,
    serialize_share_tensor,
)
from .activation import trusted_activation
from .schedule import ConvPlan
from .state import AliceState, BobState, EncryptMode, Phase, create_alice_state, create_bob_state

logger = logging.getLogger(__name__)

ALICE_STREAM = 0
BOB_STREAM = 1
ACTIVATION_STREAM = 2

DIGEST_ERROR_PREFIX = "digest:"


# Instrumentation

@contextmanager
def _measured(state, phase: str):
    """Accumulate wall-clock time and ring transform counts under a phase name."""
    start = time.perf_counter()
    with count_transforms() as counts:
        yield
    state["timings"][phase] += time.perf_counter() - start
    state["transform_counts"][phase].update(counts)


@contextmanager
def _timed(state, phase: str):
    start = time.perf_counter()
    yield
    state["timings"][phase] += time.perf_counter() - start


# Message checks

def peer_error(frame: Frame) -> ProtocolError:
    """Exception describing an Error frame received from the peer."""
    text = decode_error(frame.payload)
    if text.startswith(DIGEST_ERROR_PREFIX):
        exc: ProtocolError = DigestMismatch(f"Peer rejected the session: {text}")
    else:
        exc = ProtocolError(f"Peer reported an error: {text}")
    exc.from_peer = True
    return exc


def _expect(state, frame: Frame, msg_type: MessageType, phase: Phase):
    if frame.msg_type == MessageType.ERROR:
        raise peer_error(frame)
    if state["phase"] != phase or frame.msg_type != msg_type:
        raise ProtocolOrderViolation(
            f"Got {frame.msg_type.name} in phase {state['phase'].value}; "
            f"expected {msg_type.name} in phase {phase.value}"
        )


def _require_phase(state, phase: Phase, step: str):
    if state["phase"] != phase:
        raise ProtocolOrderViolation(f"{step} called in phase {state['phase'].value}, needs {phase.value}")


def _current_plan(state) -> ConvPlan:
    return state["plans"][state["layer_index"]]


def _after_layer(state, plan: ConvPlan) -> Phase:
    if plan.activation is not None:
        return Phase.ACTIVATION
    if state["layer_index"] + 1 < len(state["plans"]):
        return Phase.NEXT_LAYER
    return Phase.REVEAL


def _share_tensor(frame: Frame, params: ParamSet, shape: tuple) -> np.ndarray:
    tensor = deserialize_share_tensor(frame.payload, params.chain.p_a.modulus)
    if tensor.shape != tuple(shape):
        raise MalformedPayload(f"Share tensor shape {tensor.shape}, expected {tuple(shape)}")
    return tensor


def hello_frame(state) -> Frame:
    return Frame(MessageType.HELLO, encode_digest(state["digest"]))


def _check_digest(state, frame: Frame):
    theirs = decode_digest(frame.payload)
    if theirs != state["digest"]:
        raise DigestMismatch(
            f"Session digests differ (ours {state['digest'].hex()[:16]}, theirs {theirs.hex()[:16]})"
        )


# Alice

def alice_setup(params: ParamSet, plans: List[ConvPlan], mode: EncryptMode, digest: bytes,
                seed: int) -> AliceState:
    """Generate Alice's key; the only setup she has."""
    rng = make_rng(seed, ALICE_STREAM)
    start = time.perf_counter()
    with count_transforms() as counts:
        sk = keygen(params.rlwe, rng)
    state = create_alice_state(params, plans, mode, digest, sk, rng)
    state["timings"]["setup"] += time.perf_counter() - start
    state["transform_counts"]["setup"].update(counts)
    return state


def alice_handle_hello(state: AliceState, frame: Frame):
    """
    Raises:
        DigestMismatch: If Bob runs a different session
    """
    _expect(state, frame, MessageType.HELLO, Phase.HELLO)
    _check_digest(state, frame)
    state["phase"] = Phase.READY


def _encrypt_layer(state: AliceState, x: np.ndarray, plan: ConvPlan) -> Frame:
    params = state["params"]
    rlwe = params.rlwe
    p_n = params.chain.p_n
    encryptor = encrypt_freq_direct if state["mode"] == EncryptMode.FREQ_DIRECT else encrypt

    cts = []
    with _measured(state, "encrypt"):
        for c in range(plan.channels_in):
            freq = ntt_2d(pad_image(x[c], plan.geometry, p_n))
            for block in flatten_blocks(freq, rlwe.n):
                slots = PlainVec(rlwe.p_e.array(block))
                cts.append(encryptor(slots, state["sk"], rlwe, state["rng"]))

    logger.info(
        f"Alice: layer {plan.index} encrypted as {len(cts)} ciphertext(s) ({state['mode'].value})"
    )
    return Frame(MessageType.CIPHERTEXT_BLOCKS, serialize_ciphertexts(cts))


def alice_begin_layer(state: AliceState, image) -> Frame:
    """
    Pad, transform, flatten and encrypt the input image.

    Args:
        state: Alice's state after the Hello exchange
        image: (channels, h, w) signed integers

    Returns:
        CiphertextBlocks frame

    Raises:
        GeometryMismatch: If the image does not match the first layer
    """
    _require_phase(state, Phase.READY, "alice_begin_layer")
    plan = state["plans"][0]
    x = state["params"].chain.p_n.array(image)
    if x.shape != plan.input_shape:
        raise GeometryMismatch(f"Image shape {x.shape} does not match {plan.input_shape}")
    frame = _encrypt_layer(state, x, plan)
    state["phase"] = Phase.AWAIT_SHARE
    return frame


def alice_receive_share(state: AliceState, frame: Frame) -> np.ndarray:
    """
    Decrypt the encrypted shares, inverse transform and crop.

    Returns:
        s_A of shape (channels_out, h_out, w_out), residues mod p_A
    """
    _expect(state, frame, MessageType.ALICE_SHARE_CIPHERTEXTS, Phase.AWAIT_SHARE)
    params = state["params"]
    plan = _current_plan(state)
    g = plan.geometry
    p_a = params.chain.p_a.modulus

    with _measured(state, "decrypt"):
        cts = deserialize_ciphertexts(frame.payload, params.rlwe, plan.channels_out * plan.blocks)
        share = params.chain.p_n.zeros(plan.output_shape)
        for o in range(plan.channels_out):
            blocks = [
                decrypt(ct, state["sk"], params.rlwe).slots % p_a
                for ct in cts[o * plan.blocks:(o + 1) * plan.blocks]
            ]
            freq = unflatten_blocks(blocks, g.padded_h, g.padded_w, params.chain.p_n)
            share[o] = crop_output(intt_2d(freq), g)

    state["share"] = share
    state["phase"] = _after_layer(state, plan)
    logger.info(f"Alice: received share for layer {plan.index}")
    return share


def alice_request_activation(state: AliceState) -> Frame:
    """Send s_A to the activation stub."""
    _require_phase(state, Phase.ACTIVATION, "alice_request_activation")
    state["phase"] = Phase.AWAIT_ACTIVATION
    return Frame(MessageType.ACTIVATION_SHARE_UP, serialize_share_tensor(state["share"]))


def alice_accept_activation(state: AliceState, frame: Frame) -> np.ndarray:
    """Take the post-activation share s_A'."""
    _expect(state, frame, MessageType.ACTIVATION_SHARE_DOWN, Phase.AWAIT_ACTIVATION)
    plan = _current_plan(state)
    state["share"] = _share_tensor(frame, state["params"], plan.output_shape)
    more = state["layer_index"] + 1 < len(state["plans"])
    state["phase"] = Phase.NEXT_LAYER if more else Phase.REVEAL
    return state["share"]


def alice_continue_layer(state: AliceState, s_a: np.ndarray) -> Frame:
    """
    Transform and encrypt Alice's share as the next layer's input.

    Raises:
        GeometryMismatch: If the share does not match the next layer
    """
    _require_phase(state, Phase.NEXT_LAYER, "alice_continue_layer")
    state["layer_index"] += 1
    plan = _current_plan(state)
    x = state["params"].chain.p_n.array(s_a)
    if x.shape != plan.input_shape:
        raise GeometryMismatch(f"Share shape {x.shape} does not match {plan.input_shape}")
    frame = _encrypt_layer(state, x, plan)
    state["phase"] = Phase.AWAIT_SHARE
    return frame


def alice_finish(state: AliceState, frame: Frame) -> np.ndarray:
    """
    Combine Bob's final share with Alice's and lift to centered integers.
    """
    _expect(state, frame, MessageType.ACTIVATION_SHARE_DOWN, Phase.REVEAL)
    params = state["params"]
    s_b = _share_tensor(frame, params, state["share"].shape)
    combined = recombine_clear(state["share"], s_b, params.chain.p_a)
    state["output"] = params.chain.p_a.centered(combined)
    state["phase"] = Phase.DONE
    return state["output"]


def alice_handle_done(state: AliceState, frame: Frame):
    _expect(state, frame, MessageType.DONE, Phase.DONE)
    logger.info("Alice: session complete")


# Bob

def bob_setup(params: ParamSet, plans: List[ConvPlan], weights: List[np.ndarray], mode: EncryptMode,
              digest: bytes, seed: int) -> BobState:
    """
    Pad, transform and flatten every filter, and lift each block over q.
    None of this depends on Alice's input.
    """
    rlwe = params.rlwe
    p_n = params.chain.p_n
    start = time.perf_counter()
    operands = []
    with count_transforms() as counts:
        for plan, w in zip(plans, weights):
            layer = []
            for o in range(plan.channels_out):
                row = []
                for c in range(plan.channels_in):
                    freq = ntt_2d(pad_filter(w[o][c], plan.geometry, p_n))
                    row.append([
                        prepare_operand(PlainVec(rlwe.p_e.array(block)), rlwe)
                        for block in flatten_blocks(freq, rlwe.n)
                    ])
                layer.append(row)
            operands.append(layer)

    state = create_bob_state(
        params, plans, mode, digest, operands,
        rng=make_rng(seed, BOB_STREAM),
        activation_rng=make_rng(seed, ACTIVATION_STREAM),
    )
    state["timings"]["setup"] += time.perf_counter() - start
    state["transform_counts"]["setup"].update(counts)
    logger.info(f"Bob: prepared filters for {len(plans)} conv layer(s)")
    return state


def bob_handle_hello(state: BobState, frame: Frame) -> Frame:
    """
    Raises:
        DigestMismatch: If Alice runs a different session
    """
    _expect(state, frame, MessageType.HELLO, Phase.HELLO)
    _check_digest(state, frame)
    state["phase"] = Phase.AWAIT_INPUT
    return hello_frame(state)


def _filter_and_share(state: BobState, cts) -> Frame:
    params = state["params"]
    rlwe = params.rlwe
    chain = params.chain
    plan = _current_plan(state)
    g = plan.geometry
    beta = plan.blocks
    operands = state["operands"][plan.index]

    out_cts = []
    share = chain.p_n.zeros(plan.output_shape)
    with _measured(state, "filter"):
        # coefficient-domain inputs are moved once and reused for every output channel
        cts = [to_evaluation_domain(ct, rlwe) for ct in cts]
        for o in range(plan.channels_out):
            masks = []
            for j in range(beta):
                with _timed(state, "hadamard"):
                    acc = None
                    for c in range(plan.channels_in):
                        prod = mul_plain(cts[c * beta + j], operands[o][c][j], rlwe)
                        acc = prod if acc is None else add_ct(acc, prod)
                pair = hom_share(acc, chain, rlwe, state["rng"])
                out_cts.append(pair.alice_ct)
                masks.append(np.asarray(pair.bob_share.slots))
            freq = unflatten_blocks(masks, g.padded_h, g.padded_w, chain.p_n)
            share[o] = crop_output(intt_2d(freq), g)

    state["share"] = share
    if plan.activation is not None:
        state["phase"] = Phase.AWAIT_ACTIVATION
    else:
        _bob_advance(state)
    logger.info(f"Bob: filtered layer {plan.index}, returning {len(out_cts)} encrypted share(s)")
    return Frame(MessageType.ALICE_SHARE_CIPHERTEXTS, serialize_ciphertexts(out_cts))


def _bob_advance(state: BobState):
    if state["layer_index"] + 1 < len(state["plans"]):
        state["layer_index"] += 1
        state["phase"] = Phase.AWAIT_INPUT
    else:
        state["phase"] = Phase.REVEAL


def bob_filter(state: BobState, frame: Frame) -> Frame:
    """
    First layer: multiply by the transformed filters, accumulate over input
    channels and split into shares.

    Returns:
        AliceShareCiphertexts frame
    """
    _expect(state, frame, MessageType.CIPHERTEXT_BLOCKS, Phase.AWAIT_INPUT)
    if state["layer_index"] != 0:
        raise ProtocolOrderViolation("bob_filter handles the first layer only")
    plan = _current_plan(state)
    cts = deserialize_ciphertexts(frame.payload, state["params"].rlwe, plan.channels_in * plan.blocks)
    return _filter_and_share(state, cts)


def bob_reconstruct(state: BobState, frame: Frame) -> Frame:
    """
    Later layers: add Bob's transformed share to Alice's encrypted share
    (recovering the encrypted layer input), then filter as bob_filter does.
    """
    _expect(state, frame, MessageType.CIPHERTEXT_BLOCKS, Phase.AWAIT_INPUT)
    if state["layer_index"] == 0:
        raise ProtocolOrderViolation("bob_reconstruct needs a previous layer")
    params = state["params"]
    rlwe = params.rlwe
    plan = _current_plan(state)
    cts = deserialize_ciphertexts(frame.payload, rlwe, plan.channels_in * plan.blocks)

    with _measured(state, "reconstruct"):
        rebuilt = []
        for c in range(plan.channels_in):
            freq = ntt_2d(pad_image(state["share"][c], plan.geometry, params.chain.p_n))
            for j, block in enumerate(flatten_blocks(freq, rlwe.n)):
                ct = cts[c * plan.blocks + j]
                rebuilt.append(hom_rec(ct, PlainVec(rlwe.p_e.array(block)), params.chain, rlwe))

    return _filter_and_share(state, rebuilt)


def bob_activation(state: BobState, frame: Frame) -> Frame:
    """Run the trusted activation stub and return Alice's new share."""
    _expect(state, frame, MessageType.ACTIVATION_SHARE_UP, Phase.AWAIT_ACTIVATION)
    params = state["params"]
    plan = _current_plan(state)
    s_a = _share_tensor(frame, params, state["share"].shape)
    with _measured(state, "activation"):
        s_a_next, s_b_next = trusted_activation(
            s_a, state["share"], plan.activation, params.chain.p_a, state["activation_rng"]
        )
    state["share"] = s_b_next
    _bob_advance(state)
    return Frame(MessageType.ACTIVATION_SHARE_DOWN, serialize_share_tensor(s_a_next))


def bob_reveal(state: BobState) -> List[Frame]:
    """Hand Bob's output share to Alice and close the session."""
    _require_phase(state, Phase.REVEAL, "bob_reveal")
    state["phase"] = Phase.DONE
    logger.info("Bob: revealing output share")
    return [
        Frame(MessageType.ACTIVATION_SHARE_DOWN, serialize_share_tensor(state["share"])),
        Frame(MessageType.DONE),
    ]
