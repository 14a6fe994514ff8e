"""
Precision profiles and the dynamic-range bound on the transform modulus.
"""

from pydantic import BaseModel, ConfigDict, Field


class PrecisionProfile(BaseModel):
    """Bit widths of activations and weights plus the filter window."""

    model_config = ConfigDict(frozen=True)

    input_bits: int = Field(..., ge=1, le=32, description="Bit width of activations")
    filter_bits: int = Field(..., ge=1, le=32, description="Bit width of weights")
    filter_h: int = Field(..., ge=1, description="Filter height")
    filter_w: int = Field(..., ge=1, description="Filter width")

    @property
    def taps(self) -> int:
        return self.filter_h * self.filter_w

    @property
    def max_input(self) -> int:
        """Largest activation magnitude: 2^input_bits - 1."""
        return (1 << self.input_bits) - 1

    @property
    def max_weight(self) -> int:
        return (1 << self.filter_bits) - 1


def min_pntt(profile: PrecisionProfile) -> int:
    """
    Conservative lower bound on p_N: 2^input_bits * 2^filter_bits * f_h * f_w.

    Args:
        profile: Precision profile

    Returns:
        The bound, using 2^bits for the largest magnitude
    """
    return (1 << profile.input_bits) * (1 << profile.filter_bits) * profile.taps


def exact_pntt(profile: PrecisionProfile) -> int:
    """Tight bound with (2^bits - 1) magnitudes."""
    return profile.max_input * profile.max_weight * profile.taps
