"""
Payload codecs. All integers are little-endian; every decode failure is
reported as MalformedPayload.
"""

from __future__ import annotations

import struct
from typing import List, Sequence

import numpy as np

from ringbfv import Ciphertext, RingDomain, RingElem, RlweParams
from utils.exceptions import MalformedPayload

DIGEST_SIZE = 32

_CT_HEADER = struct.Struct("<BQ")  # domain tag[1B] | n[8B]
_SHARE_HEADER = struct.Struct("<III")  # channels | rows | cols

_DOMAIN_TAGS = {RingDomain.COEFFICIENT: 0, RingDomain.EVALUATION: 1}
_TAG_DOMAINS = {v: k for k, v in _DOMAIN_TAGS.items()}


def _u64(values) -> bytes:
    return np.asarray(values).astype("<u8").tobytes()


def ciphertext_size(n: int) -> int:
    return _CT_HEADER.size + 16 * n


# Ciphertexts

def serialize_ciphertext(ct: Ciphertext) -> bytes:
    """domain tag | n | c0 (n x u64) | c1 (n x u64)."""
    header = _CT_HEADER.pack(_DOMAIN_TAGS[ct.domain], ct.params.n)
    return header + _u64(ct.c0.coeffs) + _u64(ct.c1.coeffs)


def deserialize_ciphertext(data: bytes, params: RlweParams, noise_bound: int | None = None) -> Ciphertext:
    """
    Decode a ciphertext. The noise bound is not on the wire; the receiver
    assumes a fresh encryption unless told otherwise.

    Raises:
        MalformedPayload: On a length, tag, dimension or range violation
    """
    if len(data) < _CT_HEADER.size:
        raise MalformedPayload(f"Ciphertext payload too short ({len(data)} bytes)")
    tag, n = _CT_HEADER.unpack_from(data)
    if tag not in _TAG_DOMAINS:
        raise MalformedPayload(f"Unknown domain tag {tag}")
    if n != params.n:
        raise MalformedPayload(f"Ciphertext dimension {n} does not match n = {params.n}")
    if len(data) != ciphertext_size(n):
        raise MalformedPayload(f"Ciphertext needs {ciphertext_size(n)} bytes, got {len(data)}")

    raw = np.frombuffer(data, dtype="<u8", offset=_CT_HEADER.size)
    if np.any(raw >= np.uint64(params.q.modulus)):
        raise MalformedPayload("Ciphertext coefficient out of range")

    dtype = object if params.q.dtype is object else np.int64
    c0 = raw[:n].astype(dtype)
    c1 = raw[n:].astype(dtype)

    domain = _TAG_DOMAINS[tag]
    q = params.q.modulus
    return Ciphertext(
        RingElem(c0, domain, q),
        RingElem(c1, domain, q),
        params,
        params.fresh_noise if noise_bound is None else noise_bound,
    )


def serialize_ciphertexts(cts: Sequence[Ciphertext]) -> bytes:
    return b"".join(serialize_ciphertext(ct) for ct in cts)


def deserialize_ciphertexts(data: bytes, params: RlweParams, expected: int | None = None,
                            noise_bound: int | None = None) -> List[Ciphertext]:
    """
    Decode a concatenation of fixed-size ciphertexts.

    Raises:
        MalformedPayload: If the payload is not a whole number of ciphertexts
    """
    size = ciphertext_size(params.n)
    if not data or len(data) % size:
        raise MalformedPayload(f"Payload of {len(data)} bytes is not a multiple of {size}")
    count = len(data) // size
    if expected is not None and count != expected:
        raise MalformedPayload(f"Expected {expected} ciphertexts, got {count}")
    return [
        deserialize_ciphertext(data[i * size:(i + 1) * size], params, noise_bound)
        for i in range(count)
    ]


# Share tensors

def serialize_share_tensor(shares: np.ndarray) -> bytes:
    """channels | rows | cols (u32 each) then row-major u64 residues."""
    arr = np.asarray(shares)
    if arr.ndim != 3:
        raise ValueError(f"Share tensor must be 3-dimensional, got shape {arr.shape}")
    return _SHARE_HEADER.pack(*arr.shape) + _u64(arr.reshape(-1))


def deserialize_share_tensor(data: bytes, modulus: int) -> np.ndarray:
    """
    Raises:
        MalformedPayload: On a length mismatch or a residue >= modulus
    """
    if len(data) < _SHARE_HEADER.size:
        raise MalformedPayload(f"Share payload too short ({len(data)} bytes)")
    channels, rows, cols = _SHARE_HEADER.unpack_from(data)
    count = channels * rows * cols
    if len(data) != _SHARE_HEADER.size + 8 * count:
        raise MalformedPayload(f"Share tensor {channels}x{rows}x{cols} does not match {len(data)} bytes")
    raw = np.frombuffer(data, dtype="<u8", offset=_SHARE_HEADER.size)
    if np.any(raw >= np.uint64(modulus)):
        raise MalformedPayload("Share residue out of range")
    return raw.astype(np.int64).reshape(channels, rows, cols)


# Hello / Error

def encode_digest(digest: bytes) -> bytes:
    if len(digest) != DIGEST_SIZE:
        raise ValueError(f"Digest must be {DIGEST_SIZE} bytes")
    return bytes(digest)


def decode_digest(data: bytes) -> bytes:
    if len(data) != DIGEST_SIZE:
        raise MalformedPayload(f"Hello digest must be {DIGEST_SIZE} bytes, got {len(data)}")
    return bytes(data)


def encode_error(message: str) -> bytes:
    return message.encode("utf-8")


def decode_error(data: bytes) -> str:
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise MalformedPayload(f"Error text is not UTF-8: {e}") from e
