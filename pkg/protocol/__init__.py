"""Two-party convolution protocol package initialization."""

from .activation import apply_activation, trusted_activation
from .parties import (
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
)
from .reference import plaintext_pipeline
from .schedule import (
    ActivationFn,
    ConvPlan,
    LayerKind,
    LayerSpec,
    Schedule,
    check_weights,
    load_image_file,
    load_schedule,
    load_weights_file,
    plan_layers,
    seeded_image,
    seeded_weights,
)
from .session import (
    ALICE_SENDS,
    BOB_SENDS,
    InferenceResult,
    Role,
    run_inference,
    run_two_party,
    session_digest,
)
from .state import AliceState, BobState, EncryptMode, Phase, create_alice_state, create_bob_state

__all__ = [
    "apply_activation",
    "trusted_activation",
    "alice_accept_activation",
    "alice_begin_layer",
    "alice_continue_layer",
    "alice_finish",
    "alice_handle_done",
    "alice_handle_hello",
    "alice_receive_share",
    "alice_request_activation",
    "alice_setup",
    "bob_activation",
    "bob_filter",
    "bob_handle_hello",
    "bob_reconstruct",
    "bob_reveal",
    "bob_setup",
    "hello_frame",
    "plaintext_pipeline",
    "ActivationFn",
    "ConvPlan",
    "LayerKind",
    "LayerSpec",
    "Schedule",
    "check_weights",
    "load_image_file",
    "load_schedule",
    "load_weights_file",
    "plan_layers",
    "seeded_image",
    "seeded_weights",
    "ALICE_SENDS",
    "BOB_SENDS",
    "InferenceResult",
    "Role",
    "run_inference",
    "run_two_party",
    "session_digest",
    "AliceState",
    "BobState",
    "EncryptMode",
    "Phase",
    "create_alice_state",
    "create_bob_state",
]
