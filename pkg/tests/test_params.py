"""Tests for parameter selection and the presets."""

import pytest

from modfield import is_prime
from params import (
    BuildMode,
    PrecisionProfile,
    build_params,
    build_preset,
    get_preset,
    required_q,
    validate_published_presets,
)
from params.profile import exact_pntt, min_pntt
from utils.exceptions import ParameterError, RangeViolation


def _profile(input_bits, filter_bits, fh=3, fw=3):
    return PrecisionProfile(input_bits=input_bits, filter_bits=filter_bits, filter_h=fh, filter_w=fw)


def test_range_bounds():
    assert min_pntt(_profile(8, 4)) == 36864
    assert min_pntt(_profile(12, 6)) == 2359296
    assert exact_pntt(_profile(8, 1)) == 255 * 1 * 9


def test_unified_build_medium_profile():
    params = build_params(_profile(8, 4), 2048)
    assert params.chain.is_unified
    assert params.chain.p_n.modulus == 40961
    assert params.rlwe.n == 2048
    assert not params.insecure


def test_selected_q_properties():
    params = build_params(_profile(8, 4), 2048, accumulation=2)
    q = params.rlwe.q.modulus
    assert is_prime(q)
    assert (q - 1) % (2 * 2048 * 40961) == 0
    assert q >= required_q(2048, 40961, accumulation=2)


def test_q_grows_with_accumulation():
    assert required_q(2048, 40961, accumulation=4) > required_q(2048, 40961, accumulation=1)


def test_transform_length_divides_p_minus_1():
    params = build_params(_profile(4, 3), 16, transform_length=64)
    assert (params.chain.p_n.modulus - 1) % 64 == 0


def test_rejects_bad_dimension():
    with pytest.raises(ParameterError):
        build_params(_profile(8, 4), 1000)


def test_split_build_is_rejected():
    with pytest.raises(RangeViolation):
        build_params(_profile(8, 1), 2048, mode=BuildMode.SPLIT)


def test_medium_preset(medium_params):
    assert medium_params.chain.p_n.modulus == 147457
    assert medium_params.rlwe.n == 2048
    assert medium_params.rlwe.q.bits <= 53
    assert medium_params.describe()["preset"] == "medium"


def test_toy_preset_is_insecure(toy_params):
    assert toy_params.insecure
    assert toy_params.rlwe.n == 16
    assert toy_params.label == "toy"


def test_unknown_preset():
    with pytest.raises(ParameterError):
        get_preset("huge")
    assert get_preset("MEDIUM").name == "medium"


def test_preset_accumulation_override():
    small = build_preset("toy", accumulation=1)
    assert small.accumulation == 1
    assert small.rlwe.q.modulus < build_preset("toy").rlwe.q.modulus


def test_preset_report():
    reports = {r.name: r for r in validate_published_presets()}
    assert set(reports) == {"binary", "medium", "high"}
    assert reports["medium"].passed
    assert "slot_no_wrap" in reports["binary"].failed_checks()
    assert "slot_no_wrap" in reports["high"].failed_checks()


def test_binary_conservative_range_is_explained():
    binary = {r.name: r for r in validate_published_presets()}["binary"]
    findings = {f.check: f for f in binary.findings}
    assert not findings["range_conservative"].passed
    assert findings["range_exact"].passed
    assert "exact bound 2295" in findings["range_conservative"].detail
    medium = {r.name: r for r in validate_published_presets()}["medium"]
    assert "exact bound" not in {f.check: f for f in medium.findings}["range_conservative"].detail
