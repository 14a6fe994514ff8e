"""BFV-style packed additively homomorphic encryption package initialization."""

from .ring import (
    RingDomain,
    RingElem,
    count_transforms,
    negacyclic_convolution_oracle,
    negacyclic_intt,
    negacyclic_ntt,
)
from .rlwe import DEFAULT_SIGMA, RlweParams
from .scheme import (
    Ciphertext,
    PlainOperand,
    SecretKey,
    add_ct,
    add_plain,
    decrypt,
    encrypt,
    encrypt_freq_direct,
    keygen,
    measure_noise,
    mul_plain,
    prepare_operand,
    to_coefficient_domain,
    to_evaluation_domain,
)
from .slots import PlainVec, decode_slots, encode_slots

__all__ = [
    "RingDomain",
    "RingElem",
    "count_transforms",
    "negacyclic_convolution_oracle",
    "negacyclic_intt",
    "negacyclic_ntt",
    "DEFAULT_SIGMA",
    "RlweParams",
    "Ciphertext",
    "PlainOperand",
    "SecretKey",
    "add_ct",
    "add_plain",
    "decrypt",
    "encrypt",
    "encrypt_freq_direct",
    "keygen",
    "measure_noise",
    "mul_plain",
    "prepare_operand",
    "to_coefficient_domain",
    "to_evaluation_domain",
    "PlainVec",
    "decode_slots",
    "encode_slots",
]
