"""
Layer schedules: what the network looks like, loaded from TOML, plus the
weights Bob holds for it.
"""

from __future__ import annotations

import logging
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from modfield import FieldSpec, make_rng
from ntt import ConvGeometry, ConvType, block_count
from utils.exceptions import GeometryMismatch
from utils.validators import parse_int_matrices

logger = logging.getLogger(__name__)


class LayerKind(str, Enum):
    CONV = "conv"
    ACTIVATION = "activation"


class ActivationFn(str, Enum):
    RELU = "relu"
    SQUARE = "square"
    IDENTITY = "identity"


class LayerSpec(BaseModel):
    """One schedule entry: a convolution or an activation."""

    kind: LayerKind
    filter_h: Optional[int] = Field(None, ge=1)
    filter_w: Optional[int] = Field(None, ge=1)
    conv_type: ConvType = ConvType.SAME
    channels_out: int = Field(1, ge=1)
    activation_fn: Optional[ActivationFn] = Field(None, alias="fn")

    model_config = ConfigDict(populate_by_name=True)

    @model_validator(mode="after")
    def check_kind_fields(self) -> "LayerSpec":
        if self.kind == LayerKind.CONV and (self.filter_h is None or self.filter_w is None):
            raise ValueError("Conv layers need filter_h and filter_w")
        if self.kind == LayerKind.ACTIVATION and self.activation_fn is None:
            raise ValueError("Activation layers need fn")
        return self


class Schedule(BaseModel):
    """Input shape and the ordered layers applied to it."""

    image_h: int = Field(..., ge=1)
    image_w: int = Field(..., ge=1)
    channels: int = Field(1, ge=1)
    layers: List[LayerSpec] = Field(..., min_length=1)

    @model_validator(mode="after")
    def check_order(self) -> "Schedule":
        if self.layers[0].kind != LayerKind.CONV:
            raise ValueError("A schedule must start with a conv layer")
        for prev, layer in zip(self.layers, self.layers[1:]):
            if prev.kind == LayerKind.ACTIVATION and layer.kind == LayerKind.ACTIVATION:
                raise ValueError("Two activation layers in a row")

        h, w = self.image_h, self.image_w
        for layer in self.conv_layers:
            if layer.conv_type == ConvType.VALID:
                h, w = h - layer.filter_h + 1, w - layer.filter_w + 1
                if h < 1 or w < 1:
                    raise ValueError("A valid convolution shrinks the image to nothing")
        return self

    @property
    def conv_layers(self) -> List[LayerSpec]:
        return [layer for layer in self.layers if layer.kind == LayerKind.CONV]

    def shape_summary(self) -> Dict[str, Any]:
        """Everything both parties must agree on; no weights."""
        return {
            "input": [self.channels, self.image_h, self.image_w],
            "layers": [layer.model_dump(mode="json", by_alias=False) for layer in self.layers],
        }


@dataclass(frozen=True)
class ConvPlan:
    """
    Resolved convolution step.

    Attributes:
        index: Position among the conv layers
        geometry: Padded transform geometry under p_N
        channels_in: Input channels
        channels_out: Output channels
        activation: Activation applied to the output, if any
        blocks: Ciphertexts per channel, ceil(L_h * L_w / n)
    """

    index: int
    geometry: ConvGeometry
    channels_in: int
    channels_out: int
    activation: Optional[ActivationFn]
    blocks: int

    @property
    def input_shape(self) -> tuple:
        return self.channels_in, self.geometry.image_h, self.geometry.image_w

    @property
    def output_shape(self) -> tuple:
        return self.channels_out, self.geometry.output_h, self.geometry.output_w

    @property
    def weight_shape(self) -> tuple:
        return self.channels_out, self.channels_in, self.geometry.filter_h, self.geometry.filter_w


def plan_layers(schedule: Schedule, field: FieldSpec, n: int) -> List[ConvPlan]:
    """
    Resolve geometries, channel counts and block counts for every conv layer.

    Raises:
        BadGeometry: If a padded length does not fit the transform modulus
    """
    plans = []
    channels, h, w = schedule.channels, schedule.image_h, schedule.image_w
    layers = schedule.layers
    conv_index = 0

    for i, layer in enumerate(layers):
        if layer.kind != LayerKind.CONV:
            continue
        geometry = ConvGeometry.plan(h, w, layer.filter_h, layer.filter_w, layer.conv_type, field)
        following = layers[i + 1] if i + 1 < len(layers) else None
        activation = following.activation_fn if following and following.kind == LayerKind.ACTIVATION else None
        plans.append(
            ConvPlan(
                index=conv_index,
                geometry=geometry,
                channels_in=channels,
                channels_out=layer.channels_out,
                activation=activation,
                blocks=block_count(geometry.padded_h, geometry.padded_w, n),
            )
        )
        logger.debug(
            f"Conv {conv_index}: {channels}x{h}x{w} * {layer.filter_h}x{layer.filter_w} "
            f"-> {geometry.padded_h}x{geometry.padded_w} grid, {plans[-1].blocks} block(s)"
        )
        conv_index += 1
        channels, h, w = layer.channels_out, geometry.output_h, geometry.output_w

    return plans


def load_schedule(path: str | Path) -> Schedule:
    """
    Load a schedule from TOML.

    Expected layout:
        [input]  height, width, channels
        [[layers]]  kind = "conv" | "activation", plus filter_h, filter_w,
                    conv_type, channels_out or fn
    """
    with open(path, "rb") as f:
        data = tomllib.load(f)
    image = data.get("input", {})
    schedule = Schedule(
        image_h=image.get("height"),
        image_w=image.get("width"),
        channels=image.get("channels", 1),
        layers=data.get("layers", []),
    )
    logger.info(f"Loaded schedule from {path}: {len(schedule.layers)} layers")
    return schedule


# Weights

def seeded_weights(plans: List[ConvPlan], seed: int, bits: int) -> List[np.ndarray]:
    """Signed weights with |w| < 2^bits, one (out, in, f_h, f_w) array per conv."""
    rng = make_rng(seed, 0xB0B)
    bound = (1 << bits) - 1
    return [
        rng.integers(-bound, bound + 1, size=plan.weight_shape, dtype=np.int64)
        for plan in plans
    ]


def seeded_image(schedule: Schedule, seed: int, bits: int) -> np.ndarray:
    """Signed activations with |u| < 2^bits in (channels, h, w) layout."""
    rng = make_rng(seed, 0xA11CE)
    bound = (1 << bits) - 1
    return rng.integers(-bound, bound + 1, size=(schedule.channels, schedule.image_h, schedule.image_w),
                        dtype=np.int64)


def check_weights(weights: List[np.ndarray], plans: List[ConvPlan]):
    """
    Raises:
        GeometryMismatch: If the weight tensors do not match the plans
    """
    if len(weights) != len(plans):
        raise GeometryMismatch(f"Expected weights for {len(plans)} conv layers, got {len(weights)}")
    for plan, w in zip(plans, weights):
        if tuple(np.shape(w)) != plan.weight_shape:
            raise GeometryMismatch(
                f"Conv {plan.index} weights have shape {np.shape(w)}, expected {plan.weight_shape}"
            )


def load_weights_file(path: str | Path, plans: List[ConvPlan]) -> List[np.ndarray]:
    """
    Read plain-integer filters: one matrix per (conv, out, in), in that order,
    separated by blank lines.

    Raises:
        ValueError: If the file does not parse
        GeometryMismatch: If the matrices do not fit the plans
    """
    ok, error, matrices = parse_int_matrices(Path(path).read_text(encoding="utf-8"))
    if not ok:
        raise ValueError(f"{path}: {error}")

    needed = sum(plan.channels_out * plan.channels_in for plan in plans)
    if len(matrices) != needed:
        raise GeometryMismatch(f"{path}: expected {needed} filter matrices, found {len(matrices)}")

    weights, cursor = [], 0
    for plan in plans:
        count = plan.channels_out * plan.channels_in
        chunk = np.array(matrices[cursor:cursor + count], dtype=np.int64)
        cursor += count
        if chunk.shape[1:] != plan.weight_shape[2:]:
            raise GeometryMismatch(f"{path}: conv {plan.index} filters must be {plan.weight_shape[2:]}")
        weights.append(chunk.reshape(plan.weight_shape))
    logger.info(f"Loaded {needed} filter matrices from {path}")
    return weights


def load_image_file(path: str | Path, schedule: Schedule) -> np.ndarray:
    """
    Read an input image: one integer matrix per channel.

    Raises:
        ValueError: If the file does not parse
        GeometryMismatch: If the shape does not match the schedule
    """
    ok, error, matrices = parse_int_matrices(Path(path).read_text(encoding="utf-8"))
    if not ok:
        raise ValueError(f"{path}: {error}")
    image = np.array(matrices, dtype=np.int64)
    expected = (schedule.channels, schedule.image_h, schedule.image_w)
    if image.shape != expected:
        raise GeometryMismatch(f"{path}: image shape {image.shape}, schedule expects {expected}")
    return image
