"""
CLI commands: parameter inspection, the two-party demo, the benchmark
harness and the plaintext reference runner.

Each command returns a process exit code; exceptions propagate to main.py,
which maps them to exit codes.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import time
from typing import Any, Dict, List

import numpy as np

from ntt import Domain, FreqTensor, choose_length, ntt_2d
from params import min_pntt, validate_published_presets
from protocol import (
    EncryptMode,
    InferenceResult,
    LayerKind,
    Role,
    plaintext_pipeline,
    plan_layers,
    run_inference,
    run_two_party,
)
from wire import TcpTransport, transcript_bytes
from .config import OutputFormat, RoleChoice, RunConfig

logger = logging.getLogger(__name__)

BENCH_COLUMNS = [
    "mode",
    "iterations",
    "t_setup_s",
    "t_online_s",
    "encrypt_s",
    "filter_s",
    "hadamard_s",
    "decrypt_s",
    "reconstruct_s",
    "activation_s",
    "hadamard_fraction",
    "transforms_online",
    "transforms_ciphertext",
    "bytes_alice_sent",
    "bytes_alice_received",
]

ALICE_PHASES = ("encrypt", "decrypt")
BOB_PHASES = ("filter", "hadamard", "reconstruct", "activation")


def _emit(config: RunConfig, payload: Dict[str, Any], human: str,
          csv_rows: List[Dict[str, Any]], columns: List[str]):
    """Write the report in the configured format to --out or stdout."""
    if config.output_format == OutputFormat.JSON:
        text = json.dumps(payload, indent=2, default=str)
    elif config.output_format == OutputFormat.CSV:
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=columns, extrasaction="ignore")
        writer.writeheader()
        writer.writerows(csv_rows)
        text = buffer.getvalue()
    else:
        text = human

    if config.out is not None:
        config.out.write_text(text + ("" if text.endswith("\n") else "\n"), encoding="utf-8")
        logger.info(f"Report written to {config.out}")
    else:
        print(text)


def _insecure_banner() -> str:
    return "⚠️  INSECURE: lattice dimension below 1024, for testing only"


# params

def cmd_params(config: RunConfig) -> int:
    """
    Print the selected parameter set and the report on the tabulated presets.
    """
    params = config.build_params()
    bound = min_pntt(params.profile)
    reports = validate_published_presets()

    payload = {
        "params": params.describe(),
        "bound": bound,
        "preset_report": [
            {
                "preset": r.name,
                "passed": r.passed,
                "findings": [{"check": f.check, "passed": f.passed, "detail": f.detail} for f in r.findings],
            }
            for r in reports
        ],
    }

    lines = ["=" * 60, f"Parameters: {params.label}", "=" * 60]
    if params.insecure:
        lines.append(_insecure_banner())
    lines += [
        f"  p_N = {params.chain.p_n.modulus}",
        f"  p_A = {params.chain.p_a.modulus}",
        f"  p_E = {params.chain.p_e.modulus}",
        f"  n = {params.rlwe.n}",
        f"  q = {params.rlwe.q.modulus} ({params.rlwe.q.bits} bits)",
        f"  bound = {bound}",
        f"  mode = {params.mode.value}, accumulation = {params.accumulation}",
        "",
        "Tabulated presets:",
    ]
    for r in reports:
        mark = "✅" if r.passed else "❌"
        lines.append(f"  {mark} {r.name}")
        for f in r.findings:
            if not f.passed:
                lines.append(f"      {f.check}: {f.detail}")

    rows = [{"check": f"{r.name}.{f.check}", "passed": f.passed, "detail": f.detail}
            for r in reports for f in r.findings]
    _emit(config, payload, "\n".join(lines), rows, ["check", "passed", "detail"])
    return 0


# demo

def _open_transport(config: RunConfig):
    host, port = config.endpoint
    if config.listen:
        return TcpTransport.listen(host, port)
    return TcpTransport.connect(host, port)


def cmd_demo(config: RunConfig) -> int:
    """
    Run one or both parties and, where Alice can see the weights, check the
    result against the plaintext pipeline.

    Returns:
        0 on EQUAL (or when no check applies), 1 on UNEQUAL
    """
    if config.role is None:
        raise ValueError("demo needs --role")
    schedule = config.load_schedule()
    params = config.build_params(schedule)
    image, weights = config.inputs(schedule, params)
    if any(layer.kind == LayerKind.ACTIVATION for layer in schedule.layers):
        print("⚠️  INSECURE: activations run through the trusted stub that sees both shares")
    if params.insecure:
        print(_insecure_banner())

    if config.role == RoleChoice.BOTH:
        alice, _ = run_two_party(schedule, params, image, weights, config.mode, config.seed,
                                 transport=config.transport.value)
        check = True
    elif config.role == RoleChoice.ALICE:
        with _open_transport(config) as transport:
            alice = run_inference(Role.ALICE, schedule, transport, params, image=image,
                                  mode=config.mode, seed=config.seed)
        check = config.weights_file is not None
        if check:
            logger.warning("TEST-ONLY: Alice holds the weights file for the oracle check")
    else:
        with _open_transport(config) as transport:
            run_inference(Role.BOB, schedule, transport, params, weights=weights,
                          mode=config.mode, seed=config.seed)
        print("✅ Bob finished; the output is Alice's")
        return 0

    output = alice.output
    payload: Dict[str, Any] = {"output": output.tolist(), "verdict": None}
    verdict = None
    if check:
        expected = plaintext_pipeline(plan_layers(schedule, params.chain.p_n, params.rlwe.n),
                                      weights, image, params.chain.p_n)
        verdict = "EQUAL" if np.array_equal(output, expected) else "UNEQUAL"
        payload["verdict"] = verdict

    lines = [f"Output ({'x'.join(str(d) for d in output.shape)}):"]
    for channel in output:
        lines.append(np.array2string(channel))
    if verdict is not None:
        lines.append(f"{'✅' if verdict == 'EQUAL' else '❌'} {verdict}")
    rows = [{"channel": c, "row": r, "values": " ".join(str(v) for v in row)}
            for c, channel in enumerate(output) for r, row in enumerate(channel)]
    _emit(config, payload, "\n".join(lines), rows, ["channel", "row", "values"])
    return 1 if verdict == "UNEQUAL" else 0


# bench

def _median_phases(results: List[InferenceResult], phases) -> Dict[str, float]:
    return {phase: float(np.median([r.timings.get(phase, 0.0) for r in results])) for phase in phases}


def _scaling(field, sizes=(16, 32, 64)) -> List[Dict[str, Any]]:
    """Image transform time for growing n_u next to n_u * log2(n_u)."""
    rng = np.random.default_rng(0)
    rows = []
    for size in sizes:
        try:
            length = choose_length(size, field)
        except ValueError:
            continue
        values = rng.integers(0, field.modulus, size=(length, length))
        x = FreqTensor.from_matrix(values, field, Domain.TIME)
        start = time.perf_counter()
        ntt_2d(x)
        seconds = time.perf_counter() - start
        n_u = length * length
        rows.append({"n_u": n_u, "seconds": seconds, "per_n_log_n": seconds / (n_u * math.log2(n_u))})
    return rows


def _bench_mode(config: RunConfig, schedule, params, image, weights, mode: EncryptMode) -> Dict[str, Any]:
    run_two_party(schedule, params, image, weights, mode, config.seed)  # warm-up
    alices, bobs = [], []
    for _ in range(config.iterations):
        alice, bob = run_two_party(schedule, params, image, weights, mode, config.seed)
        alices.append(alice)
        bobs.append(bob)

    a = _median_phases(alices, ("setup",) + ALICE_PHASES)
    b = _median_phases(bobs, ("setup",) + BOB_PHASES)
    online = sum(a[p] for p in ALICE_PHASES) + sum(b[p] for p in BOB_PHASES if p != "hadamard")
    alice, bob = alices[-1], bobs[-1]
    ciphertext = sum(
        counts.get("ciphertext", 0)
        for r in (alice, bob) for phase, counts in r.transform_counts.items() if phase != "setup"
    )
    traffic = transcript_bytes(alice.transcript)

    return {
        "mode": mode.value,
        "iterations": config.iterations,
        "t_setup_s": a["setup"] + b["setup"],
        "t_online_s": online,
        "encrypt_s": a["encrypt"],
        "filter_s": b["filter"],
        "hadamard_s": b["hadamard"],
        "decrypt_s": a["decrypt"],
        "reconstruct_s": b["reconstruct"],
        "activation_s": b["activation"],
        "hadamard_fraction": b["hadamard"] / b["filter"] if b["filter"] else 0.0,
        "transforms_online": alice.online_transforms() + bob.online_transforms(),
        "transforms_ciphertext": ciphertext,
        "bytes_alice_sent": traffic["sent"],
        "bytes_alice_received": traffic["received"],
        "transform_counts": {"alice": alice.transform_counts, "bob": bob.transform_counts},
    }


def cmd_bench(config: RunConfig) -> int:
    """
    Per-phase medians for both encryption modes, transform counts, traffic
    and the transform scaling check.
    """
    schedule = config.load_schedule()
    params = config.build_params(schedule)
    image, weights = config.inputs(schedule, params)

    rows = [
        _bench_mode(config, schedule, params, image, weights, mode)
        for mode in (EncryptMode.BASELINE, EncryptMode.FREQ_DIRECT)
    ]
    scaling = _scaling(params.chain.p_n)
    payload = {"params": params.describe(), "modes": rows, "scaling": scaling}

    lines = ["=" * 60, f"Benchmark: {params.label}, {config.iterations} iteration(s)", "=" * 60]
    for row in rows:
        lines += [
            f"{row['mode']}:",
            f"  setup    {row['t_setup_s'] * 1e3:10.2f} ms",
            f"  online   {row['t_online_s'] * 1e3:10.2f} ms",
            f"  encrypt  {row['encrypt_s'] * 1e3:10.2f} ms",
            f"  filter   {row['filter_s'] * 1e3:10.2f} ms (Hadamard {row['hadamard_s'] * 1e3:.2f} ms, "
            f"{row['hadamard_fraction']:.1%})",
            f"  decrypt  {row['decrypt_s'] * 1e3:10.2f} ms",
            f"  ring transforms online: {row['transforms_online']} "
            f"(ciphertext domain changes: {row['transforms_ciphertext']})",
            f"  bytes: sent {row['bytes_alice_sent']}, received {row['bytes_alice_received']}",
        ]
    saved = rows[0]["transforms_online"] - rows[1]["transforms_online"]
    lines.append(f"freq-direct saves {saved} ring transform(s) online")
    lines.append("Image transform scaling:")
    for s in scaling:
        lines.append(f"  n_u={s['n_u']:6d}  {s['seconds'] * 1e3:8.3f} ms  "
                     f"{s['per_n_log_n'] * 1e9:8.3f} ns per n_u*log n_u")

    _emit(config, payload, "\n".join(lines), rows, BENCH_COLUMNS)
    return 0


# oracle

def cmd_oracle(config: RunConfig) -> int:
    """Run the network in the clear on the configured image and weights."""
    schedule = config.load_schedule()
    params = config.build_params(schedule)
    image, weights = config.inputs(schedule, params)
    plans = plan_layers(schedule, params.chain.p_n, params.rlwe.n)
    output = plaintext_pipeline(plans, weights, image, params.chain.p_n)

    lines = [f"Plaintext output mod {params.chain.p_n.modulus}:"]
    lines += [np.array2string(channel) for channel in output]
    rows = [{"channel": c, "row": r, "values": " ".join(str(v) for v in row)}
            for c, channel in enumerate(output) for r, row in enumerate(channel)]
    _emit(config, {"output": output.tolist()}, "\n".join(lines), rows, ["channel", "row", "values"])
    return 0
