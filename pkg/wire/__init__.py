"""Wire format and transports package initialization."""

from .codec import (
    DIGEST_SIZE,
    ciphertext_size,
    decode_digest,
    decode_error,
    deserialize_ciphertext,
    deserialize_ciphertexts,
    deserialize_share_tensor,
    encode_digest,
    encode_error,
    serialize_ciphertext,
    serialize_ciphertexts,
    serialize_share_tensor,
)
from .frame import HEADER_SIZE, MAGIC, MAX_PAYLOAD_BYTES, VERSION, Frame, MessageType, decode_frame, parse_header
from .transport import (
    RECEIVED,
    SENT,
    InProcTransport,
    TcpListener,
    TcpTransport,
    Transcript,
    TranscriptEntry,
    Transport,
    recv_frame,
    send_frame,
    transcript_bytes,
)

__all__ = [
    "DIGEST_SIZE",
    "ciphertext_size",
    "decode_digest",
    "decode_error",
    "deserialize_ciphertext",
    "deserialize_ciphertexts",
    "deserialize_share_tensor",
    "encode_digest",
    "encode_error",
    "serialize_ciphertext",
    "serialize_ciphertexts",
    "serialize_share_tensor",
    "HEADER_SIZE",
    "MAGIC",
    "MAX_PAYLOAD_BYTES",
    "VERSION",
    "Frame",
    "MessageType",
    "decode_frame",
    "parse_header",
    "RECEIVED",
    "SENT",
    "InProcTransport",
    "TcpListener",
    "TcpTransport",
    "Transcript",
    "TranscriptEntry",
    "Transport",
    "recv_frame",
    "send_frame",
    "transcript_bytes",
]
