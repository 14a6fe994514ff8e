"""
Plaintext reference pipeline: the network evaluated in the clear with the
same modular semantics as the protocol.
"""

from typing import List

import numpy as np

from modfield import FieldSpec
from ntt import conv_oracle
from utils.exceptions import GeometryMismatch
from .activation import apply_activation
from .schedule import ConvPlan


def plaintext_pipeline(plans: List[ConvPlan], weights: List[np.ndarray], image,
                       field: FieldSpec) -> np.ndarray:
    """
    Run conv_oracle with channel accumulation and the activations.

    Args:
        plans: Resolved conv layers
        weights: One (out, in, f_h, f_w) array per conv
        image: (channels, h, w) signed integers
        field: p_N

    Returns:
        Centered output of shape (channels_out, h, w)
    """
    x = field.array(image)
    if plans and x.shape != plans[0].input_shape:
        raise GeometryMismatch(f"Image shape {x.shape} does not match {plans[0].input_shape}")

    for plan, w in zip(plans, weights):
        y = field.zeros(plan.output_shape)
        for o in range(plan.channels_out):
            for c in range(plan.channels_in):
                y[o] = (y[o] + conv_oracle(x[c], w[o][c], plan.geometry, field)) % field.modulus
        if plan.activation is not None:
            y = apply_activation(y, plan.activation, field)
        x = y

    return field.centered(x)
