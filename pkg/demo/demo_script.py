"""
Demo script walking through one oblivious convolution step by step.
Runs both parties in this process, calling each protocol step by hand.
"""

import sys
import os

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np

from params import build_preset
from protocol import (
    EncryptMode,
    alice_begin_layer,
    alice_finish,
    alice_handle_done,
    alice_handle_hello,
    alice_receive_share,
    alice_setup,
    bob_filter,
    bob_handle_hello,
    bob_reveal,
    bob_setup,
    hello_frame,
    load_schedule,
    plaintext_pipeline,
    plan_layers,
    seeded_image,
    seeded_weights,
    session_digest,
)
from utils import setup_logging

SCHEDULE = os.path.join(os.path.dirname(os.path.abspath(__file__)), "schedules", "toy_8x8_3x3.toml")
SEED = 7


def print_separator():
    """Print a visual separator."""
    print("\n" + "=" * 70 + "\n")


def walkthrough(mode: EncryptMode):
    """Drive Alice and Bob through one conv layer and compare with the oracle."""
    print("\n" + "=" * 70)
    print(f"🔐  OBLIVIOUS CONVOLUTION ({mode.value})".center(70))
    print("=" * 70)

    params = build_preset("toy")
    schedule = load_schedule(SCHEDULE)
    plans = plan_layers(schedule, params.chain.p_n, params.rlwe.n)
    image = seeded_image(schedule, SEED, params.profile.input_bits)
    weights = seeded_weights(plans, SEED, params.profile.filter_bits)
    digest = session_digest(params, schedule, mode, SEED)

    print(f"p = {params.chain.p_n.modulus}, n = {params.rlwe.n}, q has {params.rlwe.q.bits} bits")
    g = plans[0].geometry
    print(f"{g.image_h}x{g.image_w} image, {g.filter_h}x{g.filter_w} filter, "
          f"padded to {g.padded_h}x{g.padded_w}, {plans[0].blocks} ciphertext(s) per channel")

    alice = alice_setup(params, plans, mode, digest, SEED)
    bob = bob_setup(params, plans, weights, mode, digest, SEED)

    print_separator()
    print("Step 1: Hello exchange")
    reply = bob_handle_hello(bob, hello_frame(alice))
    alice_handle_hello(alice, reply)

    print("Step 2: Alice transforms and encrypts her image")
    blocks = alice_begin_layer(alice, image)
    print(f"   {blocks.wire_length} bytes to Bob")

    print("Step 3: Bob multiplies by his transformed filter and splits the result")
    shares = bob_filter(bob, blocks)
    print(f"   {shares.wire_length} bytes to Alice")

    print("Step 4: Alice decrypts her share")
    alice_receive_share(alice, shares)

    print("Step 5: Bob reveals his share, Alice recombines")
    down, done = bob_reveal(bob)
    output = alice_finish(alice, down)
    alice_handle_done(alice, done)

    expected = plaintext_pipeline(plans, weights, image, params.chain.p_n)
    print_separator()
    print("Output:")
    print(np.array2string(output[0]))
    verdict = "EQUAL" if np.array_equal(output, expected) else "UNEQUAL"
    print(f"\n{'✅' if verdict == 'EQUAL' else '❌'} {verdict} to the plaintext convolution")

    counts = {phase: dict(c) for phase, c in alice["transform_counts"].items()}
    counts_bob = {phase: dict(c) for phase, c in bob["transform_counts"].items()}
    print(f"Ring transforms, Alice: {counts}")
    print(f"Ring transforms, Bob:   {counts_bob}")
    return verdict == "EQUAL"


def main():
    """Run the demo."""
    setup_logging("WARNING")
    print("\n🚀 Starting the oblivious convolution walkthrough...\n")
    print("This will demonstrate:")
    print("  1. Parameter and geometry selection")
    print("  2. The Hello digest exchange")
    print("  3. Encryption, filtering and secret sharing")
    print("  4. Recombining the shares")
    print("\nNote: the toy parameters are INSECURE and for illustration only.\n")

    ok = all(walkthrough(mode) for mode in (EncryptMode.BASELINE, EncryptMode.FREQ_DIRECT))

    print("\n💡 To run the parties separately:")
    print("   Bob:    python main.py demo --role bob --listen 127.0.0.1:9451 --seed 7")
    print("   Alice:  python main.py demo --role alice --connect 127.0.0.1:9451 --seed 7\n")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
