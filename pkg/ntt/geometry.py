"""
Convolution geometry: padding policy, image/filter placement and output cropping.
"""

from __future__ import annotations

import logging
from enum import Enum
from typing import Optional

import numpy as np
import sympy
from pydantic import BaseModel, ConfigDict, Field, model_validator

from modfield import FieldSpec
from utils.exceptions import BadGeometry
from .tensor import Domain, FreqTensor
from .transform import is_power_of_two

logger = logging.getLogger(__name__)


class ConvType(str, Enum):
    SAME = "same"
    VALID = "valid"


def _next_power_of_two(value: int) -> int:
    return 1 << max(value - 1, 0).bit_length()


def choose_length(required: int, field: Optional[FieldSpec]) -> int:
    """
    Transform length for one dimension.

    The smallest power of two >= required when it divides p - 1, otherwise
    the smallest divisor of p - 1 that is >= required (direct transform path).

    Raises:
        BadGeometry: If p - 1 has no divisor >= required
    """
    pow2 = _next_power_of_two(required)
    if field is None:
        return pow2

    p_minus_1 = field.modulus - 1
    if p_minus_1 % pow2 == 0:
        return pow2

    for d in sympy.divisors(p_minus_1):
        if d >= required:
            logger.debug(f"Length {required} uses divisor {d} of p - 1 = {p_minus_1}")
            return int(d)

    raise BadGeometry(f"No transform length >= {required} divides p - 1 = {p_minus_1}")


class ConvGeometry(BaseModel):
    """Shape of one 2D convolution and its padded transform grid."""

    model_config = ConfigDict(frozen=True)

    image_h: int = Field(..., ge=1)
    image_w: int = Field(..., ge=1)
    filter_h: int = Field(..., ge=1)
    filter_w: int = Field(..., ge=1)
    conv_type: ConvType = ConvType.SAME
    padded_h: int = Field(..., ge=1)
    padded_w: int = Field(..., ge=1)

    @model_validator(mode="after")
    def check_padding(self) -> "ConvGeometry":
        if self.padded_h < self.image_h + self.filter_h - 1:
            raise ValueError(f"padded_h {self.padded_h} < {self.image_h + self.filter_h - 1}")
        if self.padded_w < self.image_w + self.filter_w - 1:
            raise ValueError(f"padded_w {self.padded_w} < {self.image_w + self.filter_w - 1}")
        if self.conv_type == ConvType.VALID and (
            self.filter_h > self.image_h or self.filter_w > self.image_w
        ):
            raise ValueError("Valid convolution needs the filter to fit inside the image")
        return self

    @classmethod
    def plan(
        cls,
        image_h: int,
        image_w: int,
        filter_h: int,
        filter_w: int,
        conv_type: ConvType = ConvType.SAME,
        field: Optional[FieldSpec] = None,
    ) -> "ConvGeometry":
        """
        Pick the padded grid for a convolution under the transform modulus.

        Raises:
            BadGeometry: If the shape is invalid or no length fits the field
        """
        if min(image_h, image_w, filter_h, filter_w) < 1:
            raise BadGeometry("Image and filter dimensions must be positive")
        if conv_type == ConvType.VALID and (filter_h > image_h or filter_w > image_w):
            raise BadGeometry(
                f"Valid convolution of {image_h}x{image_w} with {filter_h}x{filter_w} is empty"
            )
        return cls(
            image_h=image_h,
            image_w=image_w,
            filter_h=filter_h,
            filter_w=filter_w,
            conv_type=conv_type,
            padded_h=choose_length(image_h + filter_h - 1, field),
            padded_w=choose_length(image_w + filter_w - 1, field),
        )

    @property
    def output_h(self) -> int:
        if self.conv_type == ConvType.SAME:
            return self.image_h
        return self.image_h - self.filter_h + 1

    @property
    def output_w(self) -> int:
        if self.conv_type == ConvType.SAME:
            return self.image_w
        return self.image_w - self.filter_w + 1

    @property
    def offset(self) -> tuple[int, int]:
        """Top-left corner of the output window in the full linear result."""
        if self.conv_type == ConvType.SAME:
            return (self.filter_h - 1) // 2, (self.filter_w - 1) // 2
        return self.filter_h - 1, self.filter_w - 1

    @property
    def fast_path(self) -> bool:
        return is_power_of_two(self.padded_h) and is_power_of_two(self.padded_w)

    @property
    def slots(self) -> int:
        return self.padded_h * self.padded_w


def _place(raw, rows: int, cols: int, pad_h: int, pad_w: int, f: FieldSpec) -> FreqTensor:
    arr = np.asarray(raw if not isinstance(raw, FreqTensor) else raw.matrix)
    if arr.shape != (rows, cols):
        raise BadGeometry(f"Expected a {rows}x{cols} matrix, got shape {arr.shape}")
    grid = f.zeros((pad_h, pad_w))
    grid[:rows, :cols] = f.array(arr)
    return FreqTensor.from_matrix(grid, f, Domain.TIME)


def pad_image(raw, g: ConvGeometry, f: FieldSpec) -> FreqTensor:
    """
    Zero-pad an image to the transform grid with the image at the origin.

    Args:
        raw: image_h x image_w residues (signed values are reduced)
        g: Convolution geometry
        f: Transform field

    Raises:
        BadGeometry: On a dimension mismatch
    """
    return _place(raw, g.image_h, g.image_w, g.padded_h, g.padded_w, f)


def pad_filter(raw, g: ConvGeometry, f: FieldSpec) -> FreqTensor:
    """Zero-pad a filter to the transform grid with the kernel at the origin."""
    return _place(raw, g.filter_h, g.filter_w, g.padded_h, g.padded_w, f)


def crop_output(full, g: ConvGeometry) -> np.ndarray:
    """
    Cut the Same or Valid window out of a padded linear-convolution result.

    Raises:
        BadGeometry: If the input is not padded_h x padded_w
    """
    arr = full.matrix if isinstance(full, FreqTensor) else np.asarray(full)
    if arr.shape != (g.padded_h, g.padded_w):
        raise BadGeometry(f"Expected a {g.padded_h}x{g.padded_w} grid, got {arr.shape}")
    top, left = g.offset
    return arr[top:top + g.output_h, left:left + g.output_w].copy()
