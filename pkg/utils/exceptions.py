"""
Exception hierarchy shared by every package.

Two families map onto CLI exit codes: ParameterError (4) and ProtocolError (3).
Arithmetic contract violations derive from ValueError as well.
"""


class EnseiError(Exception):
    """Root of all toolkit errors."""


# Parameters and moduli

class ParameterError(EnseiError):
    """Invalid or unsatisfiable parameter selection."""


class NotPrime(ParameterError, ValueError):
    """A modulus that must be prime is composite."""


class OrderNotDividing(ParameterError, ValueError):
    """Requested root-of-unity order does not divide p - 1."""


class SearchExhausted(ParameterError):
    """No prime found below the search ceiling."""


class RangeViolation(ParameterError):
    """A moduli chain fails the no-wrap validator."""


class ChainViolation(ParameterError):
    """Moduli ordering p_E >= p_A >= p_N is broken."""


# Arithmetic and geometry

class BadRoot(EnseiError, ValueError):
    """A supplied root of unity has the wrong order."""


class BadGeometry(EnseiError, ValueError):
    """Dimensions incompatible with the transform modulus or convolution shape."""


class GeometryMismatch(EnseiError, ValueError):
    """Two operands have different shapes, fields or domains."""


class LengthMismatch(EnseiError, ValueError):
    """Two residue vectors have different lengths."""


class DomainMismatch(EnseiError, ValueError):
    """Ciphertexts in different representations were combined."""


class NoiseExhausted(EnseiError):
    """Estimated noise budget would drop to zero or below."""


class RangeOverflow(EnseiError, ValueError):
    """A value left the centered range of the share modulus."""


# Protocol and transport

class ProtocolError(EnseiError):
    """Failure in the two-party protocol."""


class ProtocolOrderViolation(ProtocolError):
    """A message or operation arrived out of protocol order."""


class TransportError(ProtocolError):
    """The underlying channel failed or closed."""


class MalformedPayload(ProtocolError, ValueError):
    """Bytes on the wire do not decode to a valid frame or payload."""


class DigestMismatch(ProtocolError):
    """The parties' Hello digests differ."""
