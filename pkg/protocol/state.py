"""
Party state for the two-party convolution protocol.
Defines the state each party carries through the message flow.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from enum import Enum
from typing import Dict, List, Optional, TypedDict

import numpy as np

from params import ParamSet
from ringbfv import PlainOperand, SecretKey
from .schedule import ConvPlan


class EncryptMode(str, Enum):
    BASELINE = "baseline"
    FREQ_DIRECT = "freq-direct"


class Phase(str, Enum):
    HELLO = "hello"
    READY = "ready"                    # Alice: may send the first layer
    AWAIT_INPUT = "await_input"        # Bob: expects CiphertextBlocks
    AWAIT_SHARE = "await_share"        # Alice: expects AliceShareCiphertexts
    ACTIVATION = "activation"          # share held, activation pending
    AWAIT_ACTIVATION = "await_activation"
    NEXT_LAYER = "next_layer"          # Alice: may send the next layer
    REVEAL = "reveal"                  # final shares are being combined
    DONE = "done"


class AliceState(TypedDict):
    """State maintained by the image owner."""

    # Setup
    params: ParamSet
    plans: List[ConvPlan]
    mode: EncryptMode
    digest: bytes
    sk: SecretKey
    rng: np.random.Generator

    # Progress
    phase: Phase
    layer_index: int
    share: Optional[np.ndarray]  # s_A, time domain, (channels, h, w)
    output: Optional[np.ndarray]

    # Instrumentation
    transform_counts: Dict[str, Counter]  # phase -> ring transform counts
    timings: Dict[str, float]  # phase -> seconds


class BobState(TypedDict):
    """State maintained by the filter owner."""

    # Setup
    params: ParamSet
    plans: List[ConvPlan]
    mode: EncryptMode
    digest: bytes
    operands: List[List[List[List[PlainOperand]]]]  # [layer][out][in][block]
    rng: np.random.Generator
    activation_rng: np.random.Generator

    # Progress
    phase: Phase
    layer_index: int
    share: Optional[np.ndarray]  # s_B, time domain, (channels, h, w)

    # Instrumentation
    transform_counts: Dict[str, Counter]
    timings: Dict[str, float]


def create_alice_state(params: ParamSet, plans: List[ConvPlan], mode: EncryptMode,
                       digest: bytes, sk: SecretKey, rng: np.random.Generator) -> AliceState:
    """
    Create Alice's initial state.

    Returns:
        AliceState waiting for the Hello exchange
    """
    return AliceState(
        params=params,
        plans=plans,
        mode=mode,
        digest=digest,
        sk=sk,
        rng=rng,
        phase=Phase.HELLO,
        layer_index=0,
        share=None,
        output=None,
        transform_counts=defaultdict(Counter),
        timings=defaultdict(float),
    )


def create_bob_state(params: ParamSet, plans: List[ConvPlan], mode: EncryptMode, digest: bytes,
                     operands: List[List[List[List[PlainOperand]]]], rng: np.random.Generator,
                     activation_rng: np.random.Generator) -> BobState:
    """
    Create Bob's initial state.

    Returns:
        BobState waiting for the Hello exchange
    """
    return BobState(
        params=params,
        plans=plans,
        mode=mode,
        digest=digest,
        operands=operands,
        rng=rng,
        activation_rng=activation_rng,
        phase=Phase.HELLO,
        layer_index=0,
        share=None,
        transform_counts=defaultdict(Counter),
        timings=defaultdict(float),
    )
