"""
Run configuration shared by the CLI commands.
"""

from __future__ import annotations

import logging
from enum import Enum
from pathlib import Path
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ntt import ConvType
from params import BuildMode, ParamSet, PrecisionProfile, build_params, build_preset
from protocol import (
    EncryptMode,
    LayerKind,
    LayerSpec,
    Schedule,
    load_image_file,
    load_schedule,
    load_weights_file,
    plan_layers,
    seeded_image,
    seeded_weights,
)
from utils.validators import validate_endpoint

logger = logging.getLogger(__name__)


class RoleChoice(str, Enum):
    ALICE = "alice"
    BOB = "bob"
    BOTH = "both"


class TransportKind(str, Enum):
    INPROC = "inproc"
    TCP = "tcp"


class OutputFormat(str, Enum):
    HUMAN = "human"
    JSON = "json"
    CSV = "csv"


class RunConfig(BaseModel):
    """Everything a command needs, validated once from the parsed flags."""

    model_config = ConfigDict(frozen=True)

    # Parameters: a preset or an explicit profile
    preset: Optional[str] = None
    input_bits: Optional[int] = Field(None, ge=1, le=32)
    filter_bits: Optional[int] = Field(None, ge=1, le=32)
    filter_h: Optional[int] = Field(None, ge=1)
    filter_w: Optional[int] = Field(None, ge=1)
    n: int = Field(2048, ge=2)
    build_mode: BuildMode = BuildMode.UNIFIED
    accumulation: Optional[int] = Field(None, ge=1)

    # Network
    schedule_path: Optional[Path] = None
    image_h: int = Field(8, ge=1)
    image_w: int = Field(8, ge=1)
    channels: int = Field(1, ge=1)
    channels_out: int = Field(1, ge=1)
    conv_type: ConvType = ConvType.SAME
    weights_file: Optional[Path] = None
    image_file: Optional[Path] = None

    # Session
    role: Optional[RoleChoice] = None
    transport: TransportKind = TransportKind.INPROC
    listen: Optional[str] = None
    connect: Optional[str] = None
    seed: int = Field(..., ge=0)
    mode: EncryptMode = EncryptMode.BASELINE

    # Output
    output_format: OutputFormat = OutputFormat.HUMAN
    out: Optional[Path] = None
    iterations: int = Field(10, ge=1)

    @field_validator("listen", "connect")
    @classmethod
    def check_endpoint(cls, value: Optional[str]) -> Optional[str]:
        if value is None:
            return value
        ok, error, _ = validate_endpoint(value)
        if not ok:
            raise ValueError(error)
        return value

    @model_validator(mode="after")
    def check_combination(self) -> "RunConfig":
        if self.listen and self.connect:
            raise ValueError("Use either --listen or --connect, not both")
        if (self.listen or self.connect) and self.role == RoleChoice.BOTH:
            raise ValueError("--listen/--connect need --role alice or --role bob")
        if self.role in (RoleChoice.ALICE, RoleChoice.BOB) and not (self.listen or self.connect):
            raise ValueError(f"--role {self.role.value} needs --listen or --connect")
        if self.preset is None and None in (self.input_bits, self.filter_bits):
            raise ValueError("Give --preset or both --input-bits and --filter-bits")
        return self

    @property
    def endpoint(self) -> Optional[Tuple[str, int]]:
        value = self.listen or self.connect
        if value is None:
            return None
        return validate_endpoint(value)[2]

    def profile(self) -> PrecisionProfile:
        """Explicit profile from the flags (filter window defaults to 3x3)."""
        return PrecisionProfile(
            input_bits=self.input_bits,
            filter_bits=self.filter_bits,
            filter_h=self.filter_h or 3,
            filter_w=self.filter_w or 3,
        )

    def load_schedule(self) -> Schedule:
        """The schedule file, or a single conv layer built from the flags."""
        if self.schedule_path is not None:
            return load_schedule(self.schedule_path)
        fh, fw = self.filter_h or 3, self.filter_w or 3
        conv = LayerSpec(
            kind=LayerKind.CONV,
            filter_h=fh,
            filter_w=fw,
            conv_type=self.conv_type,
            channels_out=self.channels_out,
        )
        return Schedule(image_h=self.image_h, image_w=self.image_w, channels=self.channels, layers=[conv])

    def build_params(self, schedule: Optional[Schedule] = None) -> ParamSet:
        """
        Preset parameters, or parameters sized for the explicit profile and
        the schedule's transform lengths and channel counts.
        """
        if self.preset is not None:
            return build_preset(self.preset, self.accumulation)

        transform_length = 1
        accumulation = self.accumulation or 1
        if schedule is not None:
            convs = schedule.conv_layers
            longest = max(schedule.image_h, schedule.image_w) + max(
                max(c.filter_h, c.filter_w) for c in convs
            ) - 1
            transform_length = 1 << (longest - 1).bit_length()
            channels = [schedule.channels] + [c.channels_out for c in convs[:-1]]
            accumulation = self.accumulation or max(channels)
            logger.debug(f"Sizing parameters for transform length {transform_length}, accumulation {accumulation}")
        return build_params(
            self.profile(),
            self.n,
            mode=self.build_mode,
            transform_length=transform_length,
            accumulation=accumulation,
        )

    def inputs(self, schedule: Schedule, params: ParamSet):
        """
        Alice's image and Bob's weights: from files when given, otherwise seeded.

        Returns:
            (image, weights)
        """
        plans = plan_layers(schedule, params.chain.p_n, params.rlwe.n)
        if self.image_file is not None:
            image = load_image_file(self.image_file, schedule)
        else:
            image = seeded_image(schedule, self.seed, params.profile.input_bits)
        if self.weights_file is not None:
            weights: List = load_weights_file(self.weights_file, plans)
        else:
            weights = seeded_weights(plans, self.seed, params.profile.filter_bits)
        return image, weights
