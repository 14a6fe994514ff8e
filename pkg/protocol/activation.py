"""
Activation functions on centered residues and the trusted activation stub.

The stub recombines both shares in the clear. It stands where a garbled
circuit would run and is NOT secure.
"""

import logging
from typing import Tuple

import numpy as np

from hss import recombine_clear, split_clear
from modfield import FieldSpec
from utils.exceptions import LengthMismatch, RangeOverflow
from .schedule import ActivationFn

logger = logging.getLogger(__name__)


def apply_activation(values, fn: ActivationFn, f: FieldSpec) -> np.ndarray:
    """
    Apply fn to residues read as centered integers and reduce back mod p.

    Raises:
        RangeOverflow: If a squared value leaves (-p/2, p/2]
    """
    x = f.centered(f.array(values)).astype(object)
    if fn == ActivationFn.RELU:
        y = np.where(x > 0, x, 0)
    elif fn == ActivationFn.SQUARE:
        y = x * x
        if np.any(y > f.modulus // 2):
            raise RangeOverflow(f"Square activation exceeds the centered range of p = {f.modulus}")
    else:
        y = x
    return f.array(y)


def trusted_activation(s_a, s_b, fn: ActivationFn, p_a: FieldSpec,
                       rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """
    INSECURE stand-in for the garbled-circuit activation.

    Recombines (s_a + s_b) mod p_A, applies fn on the centered lift and
    re-shares the result with a fresh uniform mask.

    Returns:
        (s_a', s_b') with s_a' + s_b' = fn(s_a + s_b) mod p_A

    Raises:
        LengthMismatch: If the share shapes differ
        RangeOverflow: If Square overflows the centered range
    """
    if np.shape(s_a) != np.shape(s_b):
        raise LengthMismatch(f"Share shapes differ: {np.shape(s_a)} vs {np.shape(s_b)}")
    logger.warning(f"INSECURE trusted activation ({fn.value}): shares are recombined in the clear")
    y = recombine_clear(s_a, s_b, p_a)
    return split_clear(apply_activation(y, fn, p_a), p_a, rng)
