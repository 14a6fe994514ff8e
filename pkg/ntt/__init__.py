"""Number-theoretic transform package initialization."""

from .geometry import ConvGeometry, ConvType, choose_length, crop_output, pad_filter, pad_image
from .oracle import conv_oracle, cyclic_conv_oracle, dft_oracle_2d
from .tensor import (
    Domain,
    FreqTensor,
    block_count,
    decode_signed,
    encode_signed,
    flatten_blocks,
    freq_hadamard,
    intt_2d,
    ntt_2d,
    unflatten_blocks,
)
from .transform import (
    dft_oracle_1d,
    intt_1d,
    inverse_batch,
    is_power_of_two,
    ntt_1d,
    ntt_batch,
    uses_fast_path,
)

__all__ = [
    "ConvGeometry",
    "ConvType",
    "choose_length",
    "crop_output",
    "pad_filter",
    "pad_image",
    "conv_oracle",
    "cyclic_conv_oracle",
    "dft_oracle_2d",
    "Domain",
    "FreqTensor",
    "block_count",
    "decode_signed",
    "encode_signed",
    "flatten_blocks",
    "freq_hadamard",
    "intt_2d",
    "ntt_2d",
    "unflatten_blocks",
    "dft_oracle_1d",
    "intt_1d",
    "inverse_batch",
    "is_power_of_two",
    "ntt_1d",
    "ntt_batch",
    "uses_fast_path",
]
