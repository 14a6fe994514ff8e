"""
Slow ground-truth convolutions and transforms used by tests and the reference pipeline.
"""

from typing import List

import numpy as np

from modfield import FieldSpec
from utils.exceptions import BadGeometry
from .geometry import ConvGeometry


def conv_oracle(u, w, g: ConvGeometry, f: FieldSpec) -> np.ndarray:
    """
    Direct linear convolution (flipped kernel) reduced mod p, then cropped.

    Args:
        u: image_h x image_w integer matrix
        w: filter_h x filter_w integer matrix
        g: Convolution geometry (conv_type selects the crop)
        f: Field the result is reduced into

    Returns:
        output_h x output_w residues

    Raises:
        BadGeometry: If the operand shapes do not match g
    """
    u = f.array(u)
    w = f.array(w)
    if u.shape != (g.image_h, g.image_w) or w.shape != (g.filter_h, g.filter_w):
        raise BadGeometry(f"Operands {u.shape} and {w.shape} do not match the geometry")

    full = f.zeros((g.image_h + g.filter_h - 1, g.image_w + g.filter_w - 1))
    for a in range(g.filter_h):
        for b in range(g.filter_w):
            if w[a, b]:
                window = full[a:a + g.image_h, b:b + g.image_w]
                full[a:a + g.image_h, b:b + g.image_w] = (window + w[a, b] * u) % f.modulus

    top, left = g.offset
    return full[top:top + g.output_h, left:left + g.output_w].copy()


def cyclic_conv_oracle(u, w, f: FieldSpec) -> np.ndarray:
    """2D cyclic convolution of two equally shaped matrices mod p."""
    u = f.array(u)
    w = f.array(w)
    if u.shape != w.shape:
        raise BadGeometry(f"Cyclic convolution needs equal shapes, got {u.shape} and {w.shape}")

    out = f.zeros(u.shape)
    for a in range(w.shape[0]):
        for b in range(w.shape[1]):
            if w[a, b]:
                out = (out + w[a, b] * np.roll(u, (a, b), axis=(0, 1))) % f.modulus
    return out


def dft_oracle_2d(x, omega_rows: int, omega_cols: int, modulus: int) -> List[List[int]]:
    """Quartic reference 2D transform in plain integers."""
    rows = [[int(v) for v in row] for row in x]
    h, w = len(rows), len(rows[0])
    return [
        [
            sum(
                rows[i][j] * pow(omega_rows, i * k, modulus) * pow(omega_cols, j * l, modulus)
                for i in range(h)
                for j in range(w)
            ) % modulus
            for l in range(w)
        ]
        for k in range(h)
    ]
