"""Parameter selection package initialization."""

from .builder import SECURE_MIN_N, BuildMode, ParamSet, build_params, required_q, select_q
from .presets import PRESETS, Preset, PresetReport, build_preset, get_preset, validate_published_presets
from .profile import PrecisionProfile, exact_pntt, min_pntt

__all__ = [
    "SECURE_MIN_N",
    "BuildMode",
    "ParamSet",
    "build_params",
    "required_q",
    "select_q",
    "PRESETS",
    "Preset",
    "PresetReport",
    "build_preset",
    "get_preset",
    "validate_published_presets",
    "PrecisionProfile",
    "exact_pntt",
    "min_pntt",
]
