"""
Named parameter presets and the descriptive report on the tabulated candidate sets.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional

from hss import ChainFinding, ModulusChain, validate_chain
from modfield import is_prime
from ringbfv import DEFAULT_SIGMA, RlweParams
from utils.exceptions import ParameterError
from .builder import SECURE_MIN_N, BuildMode, ParamSet, select_q
from .profile import PrecisionProfile, exact_pntt, min_pntt

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Preset:
    """
    Attributes:
        name: CLI name
        profile: Precision profile
        n: Lattice dimension
        modulus: Common modulus used for p_N = p_A = p_E at runtime
        accumulation: Ciphertexts summed before sharing that q is sized for
        table_p_n: Tabulated transform modulus (None for test presets)
        table_p_e: Tabulated plaintext modulus
        table_q_bits: Tabulated ceil(lg q)
    """

    name: str
    profile: PrecisionProfile
    n: int
    modulus: int
    accumulation: int
    table_p_n: Optional[int] = None
    table_p_e: Optional[int] = None
    table_q_bits: Optional[int] = None

    @property
    def insecure(self) -> bool:
        return self.n < SECURE_MIN_N


PRESETS: Dict[str, Preset] = {
    "binary": Preset(
        name="binary",
        profile=PrecisionProfile(input_bits=8, filter_bits=1, filter_h=3, filter_w=3),
        n=2048,
        modulus=12289,
        accumulation=4,
        table_p_n=2311,
        table_p_e=12289,
        table_q_bits=45,
    ),
    "medium": Preset(
        name="medium",
        profile=PrecisionProfile(input_bits=8, filter_bits=4, filter_h=3, filter_w=3),
        n=2048,
        modulus=147457,
        accumulation=4,
        table_p_n=147457,
        table_p_e=147457,
        table_q_bits=53,
    ),
    "high": Preset(
        name="high",
        profile=PrecisionProfile(input_bits=12, filter_bits=6, filter_h=3, filter_w=3),
        n=2048,
        modulus=2363393,
        accumulation=2,
        table_p_n=2359303,
        table_p_e=2363393,
        table_q_bits=60,
    ),
    "toy": Preset(
        name="toy",
        profile=PrecisionProfile(input_bits=4, filter_bits=3, filter_h=3, filter_w=3),
        n=16,
        modulus=1153,
        accumulation=8,
    ),
}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name.lower()]
    except KeyError:
        raise ParameterError(
            f"Unknown preset '{name}'. Choose one of: {', '.join(PRESETS)}"
        ) from None


def build_preset(name: str, accumulation: Optional[int] = None,
                 sigma: float = DEFAULT_SIGMA) -> ParamSet:
    """
    Unified parameter set for a named preset.

    Args:
        name: Preset name (binary, medium, high, toy)
        accumulation: Override the preset's channel accumulation (resizes q)
        sigma: Gaussian parameter

    Raises:
        ParameterError: Unknown preset or an accumulation q cannot cover
    """
    preset = get_preset(name)
    acc = accumulation or preset.accumulation
    chain = ModulusChain.unified(preset.modulus)
    q = select_q(preset.n, preset.modulus, sigma, acc)
    rlwe = RlweParams.create(preset.n, q, preset.modulus, sigma)

    if preset.insecure:
        logger.warning(f"Preset '{preset.name}' (n={preset.n}) is INSECURE; use only for testing")
    if preset.table_q_bits is not None and q.bit_length() > preset.table_q_bits:
        logger.warning(
            f"Preset '{preset.name}': selected q has {q.bit_length()} bits, "
            f"above the tabulated {preset.table_q_bits}"
        )

    return ParamSet(
        chain=chain,
        rlwe=rlwe,
        profile=preset.profile,
        mode=BuildMode.UNIFIED,
        accumulation=acc,
        preset_name=preset.name,
        insecure=preset.insecure,
    )


@dataclass(frozen=True)
class PresetReport:
    name: str
    findings: List[ChainFinding]

    @property
    def passed(self) -> bool:
        return all(f.passed for f in self.findings)

    def failed_checks(self) -> List[str]:
        return [f.check for f in self.findings if not f.passed]


def _conservative_range(preset: Preset, p_n: int) -> ChainFinding:
    bound = min_pntt(preset.profile)
    detail = f"p_N = {p_n} vs {bound}"
    if p_n < bound and p_n >= exact_pntt(preset.profile):
        detail += (
            f"; the table sizes p_N against the exact bound {exact_pntt(preset.profile)} "
            "(2^bits - 1 magnitudes), which it meets; informational only"
        )
    return ChainFinding("range_conservative", p_n >= bound, detail)


def validate_published_presets() -> List[PresetReport]:
    """
    Check the tabulated candidate sets: primality, congruences, the range
    bound (conservative and exact), the split-moduli conditions and the q
    envelope. Descriptive only; nothing raises.
    """
    reports = []
    for preset in PRESETS.values():
        if preset.table_p_n is None:
            continue
        p_n, p_e, n = preset.table_p_n, preset.table_p_e, preset.n
        two_n = 2 * n
        findings = [
            ChainFinding("p_n_prime", is_prime(p_n), f"p_N = {p_n}"),
            ChainFinding("p_e_prime", is_prime(p_e), f"p_E = {p_e}"),
            ChainFinding("p_e_splits", (p_e - 1) % two_n == 0, f"p_E mod {two_n} = {p_e % two_n}"),
            ChainFinding("p_n_congruence", (p_n - 1) % two_n == 0, f"p_N mod {two_n} = {p_n % two_n}"),
            _conservative_range(preset, p_n),
            ChainFinding(
                "range_exact",
                p_n >= exact_pntt(preset.profile),
                f"p_N = {p_n} vs {exact_pntt(preset.profile)}",
            ),
        ]
        if is_prime(p_n) and is_prime(p_e) and p_e >= p_n:
            findings.extend(validate_chain(ModulusChain.from_moduli(p_n, p_e, p_e)))

        q = select_q(n, preset.modulus, DEFAULT_SIGMA, preset.accumulation)
        findings.append(
            ChainFinding(
                "q_envelope",
                q.bit_length() <= preset.table_q_bits,
                f"selected q has {q.bit_length()} bits (accumulation {preset.accumulation}), "
                f"table {preset.table_q_bits}",
            )
        )

        report = PresetReport(name=preset.name, findings=findings)
        logger.info(f"Preset {preset.name}: {'pass' if report.passed else 'fail'} {report.failed_checks()}")
        reports.append(report)
    return reports
