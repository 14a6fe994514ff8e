"""
Frame layout shared by every transport.

magic[4B "ENSE"] | version[1B] | type[1B] | payload_len[8B LE] | payload
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from enum import IntEnum
from typing import Tuple

from utils.exceptions import MalformedPayload

MAGIC = b"ENSE"
VERSION = 0x01
MAX_PAYLOAD_BYTES = 1 << 30

HEADER = struct.Struct(
    "<"   # little-endian, standard sizes
    "4s"  # magic[4B]
    "B"   # version[1B]
    "B"   # type[1B]
    "Q"   # payload_len[8B]
)
HEADER_SIZE = HEADER.size


class MessageType(IntEnum):
    HELLO = 0x01                    # session digest
    CIPHERTEXT_BLOCKS = 0x02        # Alice -> Bob, encrypted image blocks
    ALICE_SHARE_CIPHERTEXTS = 0x03  # Bob -> Alice, encrypted shares
    ACTIVATION_SHARE_UP = 0x04      # Alice -> activation
    ACTIVATION_SHARE_DOWN = 0x05    # activation -> Alice
    DONE = 0x06
    ERROR = 0x07


@dataclass(frozen=True)
class Frame:
    msg_type: MessageType
    payload: bytes = b""

    def encode(self) -> bytes:
        return HEADER.pack(MAGIC, VERSION, int(self.msg_type), len(self.payload)) + self.payload

    @property
    def wire_length(self) -> int:
        return HEADER_SIZE + len(self.payload)


def parse_header(header: bytes, max_payload: int = MAX_PAYLOAD_BYTES) -> Tuple[MessageType, int]:
    """
    Validate a frame header.

    Returns:
        (message type, payload length)

    Raises:
        MalformedPayload: Bad magic, version, type or length
    """
    if len(header) != HEADER_SIZE:
        raise MalformedPayload(f"Header must be {HEADER_SIZE} bytes, got {len(header)}")
    magic, version, raw_type, length = HEADER.unpack(header)
    if magic != MAGIC:
        raise MalformedPayload(f"Bad magic {magic!r}")
    if version != VERSION:
        raise MalformedPayload(f"Unsupported version {version}")
    try:
        msg_type = MessageType(raw_type)
    except ValueError:
        raise MalformedPayload(f"Unknown message type 0x{raw_type:02x}") from None
    if length > min(max_payload, MAX_PAYLOAD_BYTES):
        raise MalformedPayload(f"Payload length {length} exceeds the frame cap")
    return msg_type, length


def decode_frame(data: bytes, max_payload: int = MAX_PAYLOAD_BYTES) -> Frame:
    """
    Decode one complete frame from a byte string.

    Raises:
        MalformedPayload: On any header error or a length mismatch
    """
    msg_type, length = parse_header(bytes(data[:HEADER_SIZE]), max_payload)
    payload = bytes(data[HEADER_SIZE:])
    if len(payload) != length:
        raise MalformedPayload(f"Header declares {length} payload bytes, got {len(payload)}")
    return Frame(msg_type, payload)
