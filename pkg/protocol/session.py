"""
Session driver: runs one party's side of the protocol over a transport.
"""

from __future__ import annotations

import hashlib
import json
import logging
import threading
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from config import get_settings
from params import ParamSet
from utils.exceptions import DigestMismatch, EnseiError, ProtocolOrderViolation, TransportError
from wire import (
    Frame,
    InProcTransport,
    SENT,
    MessageType,
    TcpListener,
    TcpTransport,
    Transcript,
    Transport,
    encode_error,
)
from .parties import (
    DIGEST_ERROR_PREFIX,
    alice_accept_activation,
    alice_begin_layer,
    alice_continue_layer,
    alice_finish,
    alice_handle_done,
    alice_handle_hello,
    alice_receive_share,
    alice_request_activation,
    alice_setup,
    bob_activation,
    bob_filter,
    bob_handle_hello,
    bob_reconstruct,
    bob_reveal,
    bob_setup,
    hello_frame,
    peer_error,
)
from .schedule import ConvPlan, Schedule, check_weights, plan_layers, seeded_image, seeded_weights
from .state import EncryptMode, Phase

logger = logging.getLogger(__name__)

# Frame types each party may send; everything else is a plaintext leak.
ALICE_SENDS = frozenset({
    MessageType.HELLO,
    MessageType.CIPHERTEXT_BLOCKS,
    MessageType.ACTIVATION_SHARE_UP,
    MessageType.ERROR,
})
BOB_SENDS = frozenset({
    MessageType.HELLO,
    MessageType.ALICE_SHARE_CIPHERTEXTS,
    MessageType.ACTIVATION_SHARE_DOWN,
    MessageType.DONE,
    MessageType.ERROR,
})


class Role(str, Enum):
    ALICE = "alice"
    BOB = "bob"


@dataclass
class InferenceResult:
    """
    Outcome of one party's run.

    Attributes:
        role: Which party this is
        output: Centered network output (Alice only)
        transform_counts: phase -> {category: ring transforms over q}
        timings: phase -> seconds
        transcript: Frames this party sent and received
    """

    role: Role
    output: Optional[np.ndarray]
    transform_counts: Dict[str, Dict[str, int]] = field(default_factory=dict)
    timings: Dict[str, float] = field(default_factory=dict)
    transcript: Transcript = field(default_factory=Transcript)

    def online_transforms(self) -> int:
        """Ring transforms outside setup."""
        return sum(
            sum(counts.values()) for phase, counts in self.transform_counts.items() if phase != "setup"
        )

    def online_seconds(self) -> float:
        return sum(t for phase, t in self.timings.items() if phase not in ("setup", "hadamard"))


def session_digest(params: ParamSet, schedule: Schedule, mode: EncryptMode, seed: int) -> bytes:
    """SHA-256 over the canonical JSON of everything both parties must agree on."""
    body = {
        "params": params.describe(),
        "schedule": schedule.shape_summary(),
        "mode": EncryptMode(mode).value,
        "seed": seed,
    }
    canonical = json.dumps(body, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).digest()


def _recv(transport: Transport) -> Frame:
    frame = transport.recv_frame()
    if frame.msg_type == MessageType.ERROR:
        raise peer_error(frame)
    return frame


def _send_error(transport: Transport, exc: Exception):
    prefix = DIGEST_ERROR_PREFIX + " " if isinstance(exc, DigestMismatch) else ""
    try:
        transport.send_frame(Frame(MessageType.ERROR, encode_error(f"{prefix}{exc}")))
    except TransportError:
        logger.debug("Could not deliver the error frame; peer already gone")


def _run_alice(transport: Transport, params: ParamSet, plans: List[ConvPlan], image,
               mode: EncryptMode, digest: bytes, seed: int) -> Dict[str, Any]:
    state = alice_setup(params, plans, mode, digest, seed)
    transport.send_frame(hello_frame(state))
    alice_handle_hello(state, _recv(transport))

    transport.send_frame(alice_begin_layer(state, image))
    while True:
        alice_receive_share(state, _recv(transport))
        if state["phase"] == Phase.ACTIVATION:
            transport.send_frame(alice_request_activation(state))
            alice_accept_activation(state, _recv(transport))
        if state["phase"] == Phase.NEXT_LAYER:
            transport.send_frame(alice_continue_layer(state, state["share"]))
            continue
        break

    alice_finish(state, _recv(transport))
    alice_handle_done(state, _recv(transport))
    return state


def _run_bob(transport: Transport, params: ParamSet, plans: List[ConvPlan], weights,
             mode: EncryptMode, digest: bytes, seed: int) -> Dict[str, Any]:
    state = bob_setup(params, plans, weights, mode, digest, seed)
    transport.send_frame(bob_handle_hello(state, _recv(transport)))

    while state["phase"] == Phase.AWAIT_INPUT:
        frame = _recv(transport)
        if state["layer_index"] == 0:
            transport.send_frame(bob_filter(state, frame))
        else:
            transport.send_frame(bob_reconstruct(state, frame))
        if state["phase"] == Phase.AWAIT_ACTIVATION:
            transport.send_frame(bob_activation(state, _recv(transport)))

    for frame in bob_reveal(state):
        transport.send_frame(frame)
    return state


def run_inference(
    role: Role,
    schedule: Schedule,
    transport: Transport,
    params: ParamSet,
    image=None,
    weights: Optional[List[np.ndarray]] = None,
    mode: EncryptMode = EncryptMode.BASELINE,
    seed: int = 0,
) -> InferenceResult:
    """
    Drive one party through the whole schedule.

    Args:
        role: Alice (image owner) or Bob (filter owner)
        schedule: Network shape, identical on both sides
        transport: Connected transport to the peer
        params: Parameter set, identical on both sides
        image: Alice's (channels, h, w) input; seeded when omitted
        weights: Bob's filters, one (out, in, f_h, f_w) array per conv; seeded when omitted
        mode: Baseline or frequency-direct encryption
        seed: Session seed

    Returns:
        InferenceResult; output is set for Alice only

    Raises:
        ProtocolError: On digest mismatch, ordering violations, malformed
            frames or transport failure
        EnseiError: Any arithmetic failure, after notifying the peer
    """
    role = Role(role)
    mode = EncryptMode(mode)
    plans = plan_layers(schedule, params.chain.p_n, params.rlwe.n)
    digest = session_digest(params, schedule, mode, seed)
    widest = max(plan.channels_in for plan in plans)
    if widest > params.accumulation:
        logger.warning(
            f"{widest} input channels exceed the accumulation of {params.accumulation} q was sized for"
        )

    logger.info(f"{role.value}: starting session over {len(plans)} conv layer(s), mode {mode.value}")
    try:
        if role == Role.ALICE:
            if image is None:
                image = seeded_image(schedule, seed, params.profile.input_bits)
            state = _run_alice(transport, params, plans, image, mode, digest, seed)
            output = state["output"]
        else:
            if weights is None:
                weights = seeded_weights(plans, seed, params.profile.filter_bits)
            check_weights(weights, plans)
            state = _run_bob(transport, params, plans, weights, mode, digest, seed)
            output = None
    except EnseiError as e:
        logger.error(f"{role.value}: session aborted: {e}")
        if not getattr(e, "from_peer", False) and not isinstance(e, TransportError):
            _send_error(transport, e)
        raise

    allowed = ALICE_SENDS if role == Role.ALICE else BOB_SENDS
    leaked = [entry for entry in transport.transcript.entries
              if entry.direction == SENT and entry.msg_type not in allowed]
    if leaked:
        raise ProtocolOrderViolation(f"{role.value} sent non-whitelisted frames: {leaked}")

    logger.info(f"{role.value}: session finished")
    return InferenceResult(
        role=role,
        output=output,
        transform_counts={phase: dict(counts) for phase, counts in state["transform_counts"].items()},
        timings=dict(state["timings"]),
        transcript=transport.transcript,
    )


def _in_thread(target, *args, **kwargs) -> Tuple[threading.Thread, Dict[str, Any]]:
    box: Dict[str, Any] = {}

    def runner():
        try:
            box["result"] = target(*args, **kwargs)
        except BaseException as e:  # re-raised by the caller
            box["error"] = e

    thread = threading.Thread(target=runner, name="ensei-bob", daemon=True)
    thread.start()
    return thread, box


def run_two_party(
    schedule: Schedule,
    params: ParamSet,
    image=None,
    weights: Optional[List[np.ndarray]] = None,
    mode: EncryptMode = EncryptMode.BASELINE,
    seed: int = 0,
    transport: str = "inproc",
    timeout: Optional[float] = None,
) -> Tuple[InferenceResult, InferenceResult]:
    """
    Run Alice in this thread and Bob in a helper thread.

    Args:
        transport: "inproc" (queue pair) or "tcp" (ENSEI_TCP_HOST, ephemeral port)

    Returns:
        (alice_result, bob_result)
    """
    kwargs = dict(schedule=schedule, params=params, mode=mode, seed=seed)

    if transport == "inproc":
        alice_end, bob_end = InProcTransport.pair(timeout)
        thread, box = _in_thread(run_inference, Role.BOB, transport=bob_end, weights=weights, **kwargs)
        try:
            alice = run_inference(Role.ALICE, transport=alice_end, image=image, **kwargs)
        finally:
            alice_end.close()
            thread.join()
            bob_end.close()
    elif transport == "tcp":
        listener = TcpListener(get_settings().tcp_host, 0, timeout)
        host, port = listener.address

        def serve():
            with listener, listener.accept() as bob_end:
                return run_inference(Role.BOB, transport=bob_end, weights=weights, **kwargs)

        thread, box = _in_thread(serve)
        try:
            with TcpTransport.connect(host, port, timeout) as alice_end:
                alice = run_inference(Role.ALICE, transport=alice_end, image=image, **kwargs)
        finally:
            thread.join()
    else:
        raise ValueError(f"Unknown transport '{transport}'")

    if "error" in box:
        raise box["error"]
    return alice, box["result"]
