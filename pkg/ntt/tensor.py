"""
Two-dimensional residue tensors and the separable 2D transform.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import List

import numpy as np

from modfield import FieldSpec, find_root_of_unity
from utils.exceptions import BadGeometry, DomainMismatch, GeometryMismatch
from .transform import inverse_batch, ntt_batch


class Domain(str, Enum):
    TIME = "time"
    FREQUENCY = "frequency"


@dataclass(frozen=True, eq=False)
class FreqTensor:
    """
    Row-major flattened residues mod p_N with their padded shape.

    Attributes:
        data: Flattened residues (length rows * cols)
        rows: Padded height L_h
        cols: Padded width L_w
        field: Transform field p_N
        domain: Time or Frequency
    """

    data: np.ndarray
    rows: int
    cols: int
    field: FieldSpec
    domain: Domain

    def __post_init__(self):
        if self.data.ndim != 1 or self.data.shape[0] != self.rows * self.cols:
            raise GeometryMismatch(
                f"Data of shape {self.data.shape} does not match {self.rows}x{self.cols}"
            )
        p_minus_1 = self.field.modulus - 1
        if p_minus_1 % self.rows or p_minus_1 % self.cols:
            raise BadGeometry(
                f"{self.rows}x{self.cols} transform needs both lengths to divide p - 1 = {p_minus_1}"
            )
        self.data.setflags(write=False)

    @classmethod
    def from_matrix(cls, matrix: np.ndarray, field: FieldSpec, domain: Domain) -> "FreqTensor":
        matrix = field.array(matrix)
        rows, cols = matrix.shape
        return cls(matrix.reshape(rows * cols).copy(), rows, cols, field, domain)

    @property
    def matrix(self) -> np.ndarray:
        return self.data.reshape(self.rows, self.cols)

    def same_layout(self, other: "FreqTensor") -> bool:
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.field.modulus == other.field.modulus
            and self.domain == other.domain
        )


def _roots(t: FreqTensor):
    try:
        return (
            find_root_of_unity(t.rows, t.field),
            find_root_of_unity(t.cols, t.field),
        )
    except ValueError as e:
        raise BadGeometry(str(e)) from e


def ntt_2d(t: FreqTensor) -> FreqTensor:
    """
    Separable forward transform: rows first, then columns.

    Raises:
        DomainMismatch: If t is not in the time domain
        BadGeometry: If a dimension does not divide p_N - 1
    """
    if t.domain != Domain.TIME:
        raise DomainMismatch("ntt_2d expects a time-domain tensor")
    row_root, col_root = _roots(t)
    out = ntt_batch(t.matrix, col_root, t.field)
    out = ntt_batch(out.T, row_root, t.field).T
    return FreqTensor.from_matrix(out, t.field, Domain.FREQUENCY)


def intt_2d(t: FreqTensor) -> FreqTensor:
    """
    Inverse of ntt_2d.

    Raises:
        DomainMismatch: If t is not in the frequency domain
        BadGeometry: If a dimension does not divide p_N - 1
    """
    if t.domain != Domain.FREQUENCY:
        raise DomainMismatch("intt_2d expects a frequency-domain tensor")
    row_root, col_root = _roots(t)
    out = inverse_batch(t.matrix, col_root, t.field)
    out = inverse_batch(out.T, row_root, t.field).T
    return FreqTensor.from_matrix(out, t.field, Domain.TIME)


def freq_hadamard(a: FreqTensor, b: FreqTensor) -> FreqTensor:
    """
    Element-wise product of two frequency tensors.

    Raises:
        GeometryMismatch: On differing shape, field or domain
    """
    if not a.same_layout(b) or a.domain != Domain.FREQUENCY:
        raise GeometryMismatch("Hadamard operands must share shape, field and frequency domain")
    return FreqTensor(a.data * b.data % a.field.modulus, a.rows, a.cols, a.field, a.domain)


def encode_signed(values, f: FieldSpec) -> np.ndarray:
    """Centered encoding: v in (-p/2, p/2] maps to v mod p."""
    return f.array(values)


def decode_signed(residues: np.ndarray, f: FieldSpec) -> np.ndarray:
    """Lift residues back to the centered range."""
    return f.centered(np.asarray(residues))


def block_count(rows: int, cols: int, n: int) -> int:
    """ceil(rows * cols / n): ciphertexts needed for one flattened tensor."""
    return -(-(rows * cols) // n)


def flatten_blocks(t: FreqTensor, n: int) -> List[np.ndarray]:
    """Split the row-major data into n-slot blocks, zero-padding the last."""
    count = block_count(t.rows, t.cols, n)
    padded = t.field.zeros(count * n)
    padded[: t.data.shape[0]] = t.data
    return [padded[i * n:(i + 1) * n].copy() for i in range(count)]


def unflatten_blocks(blocks: List[np.ndarray], rows: int, cols: int, f: FieldSpec,
                     domain: Domain = Domain.FREQUENCY) -> FreqTensor:
    """Reassemble n-slot blocks into a rows x cols tensor."""
    if block_count(rows, cols, len(blocks[0]) if blocks else 1) != len(blocks):
        raise GeometryMismatch(f"{len(blocks)} blocks cannot hold a {rows}x{cols} tensor")
    flat = f.array(np.concatenate(blocks))[: rows * cols]
    return FreqTensor(flat.copy(), rows, cols, f, domain)
