"""Shared fixtures."""

import numpy as np
import pytest

from modfield import field_for
from ntt import ConvType
from params import build_preset
from protocol import LayerKind, LayerSpec, Schedule


@pytest.fixture(autouse=True)
def isolated_settings(tmp_path, monkeypatch):
    """Keep log files and .env lookups inside the test's temp directory."""
    monkeypatch.setenv("ENSEI_LOG_DIR", str(tmp_path / "logs"))
    monkeypatch.chdir(tmp_path)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture(scope="session")
def toy_params():
    return build_preset("toy")


@pytest.fixture(scope="session")
def medium_params():
    return build_preset("medium")


@pytest.fixture
def f17():
    return field_for(17)


@pytest.fixture
def f12289():
    return field_for(12289)


def single_conv(h, w, fh, fw, conv_type=ConvType.SAME, channels=1, channels_out=1, activation=None):
    """Schedule with one conv layer and an optional activation after it."""
    layers = [LayerSpec(kind=LayerKind.CONV, filter_h=fh, filter_w=fw, conv_type=conv_type,
                        channels_out=channels_out)]
    if activation is not None:
        layers.append(LayerSpec(kind=LayerKind.ACTIVATION, activation_fn=activation))
    return Schedule(image_h=h, image_w=w, channels=channels, layers=layers)
