"""Tests for the number-theoretic transforms and convolution geometry."""

import numpy as np
import pytest

from modfield import field_for, find_root_of_unity
from ntt import (
    ConvGeometry,
    ConvType,
    Domain,
    FreqTensor,
    block_count,
    choose_length,
    conv_oracle,
    crop_output,
    cyclic_conv_oracle,
    decode_signed,
    dft_oracle_1d,
    dft_oracle_2d,
    encode_signed,
    flatten_blocks,
    freq_hadamard,
    intt_1d,
    intt_2d,
    ntt_1d,
    ntt_2d,
    ntt_batch,
    pad_filter,
    pad_image,
    unflatten_blocks,
    uses_fast_path,
)
from utils.exceptions import BadGeometry, BadRoot, DomainMismatch, GeometryMismatch


def _cyclic_1d(a, b, p):
    n = len(a)
    return [sum(int(a[j]) * int(b[(k - j) % n]) for j in range(n)) % p for k in range(n)]


# 1D

@pytest.mark.parametrize("c", [0, 1, 5, 16])
def test_constant_vector(f17, c):
    assert ntt_1d([c, c, c, c], 4, f17).tolist() == [4 * c % 17, 0, 0, 0]


def test_rejects_non_primitive_root(f17):
    with pytest.raises(BadRoot):
        ntt_1d([1, 2, 3, 4], 2, f17)
    with pytest.raises(BadRoot):
        ntt_1d([1, 2, 3, 4], 16, f17)


@pytest.mark.parametrize("length", [2, 3, 4, 8, 12, 16, 64])
def test_matches_dft_oracle(rng, f12289, length):
    omega = find_root_of_unity(length, f12289)
    x = rng.integers(0, 12289, size=length)
    assert ntt_1d(x, omega, f12289).tolist() == dft_oracle_1d(x.tolist(), omega, 12289)


@pytest.mark.parametrize("length", [4, 6, 32])
def test_inverse_round_trip(rng, f12289, length):
    omega = find_root_of_unity(length, f12289)
    x = rng.integers(0, 12289, size=length)
    assert np.array_equal(intt_1d(ntt_1d(x, omega, f12289), omega, f12289), x)


def test_fast_path_selection(f12289):
    assert uses_fast_path(1024, f12289)
    assert not uses_fast_path(12, f12289)
    assert not uses_fast_path(8192, f12289)


def test_convolution_theorem_1d(rng, f12289):
    for length in (4, 8, 16):
        omega = find_root_of_unity(length, f12289)
        for _ in range(50):
            a = rng.integers(0, 12289, size=length)
            b = rng.integers(0, 12289, size=length)
            product = ntt_1d(a, omega, f12289) * ntt_1d(b, omega, f12289) % 12289
            assert intt_1d(product, omega, f12289).tolist() == _cyclic_1d(a, b, 12289)


def test_batch_transforms_each_row(rng, f12289):
    omega = find_root_of_unity(8, f12289)
    x = rng.integers(0, 12289, size=(3, 8))
    out = ntt_1d(x, omega, f12289)
    for row_in, row_out in zip(x, out):
        assert row_out.tolist() == dft_oracle_1d(row_in.tolist(), omega, 12289)


# 2D

def test_2d_matches_oracle(rng, f12289):
    x = rng.integers(0, 12289, size=(4, 4))
    t = FreqTensor.from_matrix(x, f12289, Domain.TIME)
    w = find_root_of_unity(4, f12289)
    assert ntt_2d(t).matrix.tolist() == dft_oracle_2d(x.tolist(), w, w, 12289)


def test_2d_rectangular_matches_oracle(rng, f12289):
    x = rng.integers(0, 12289, size=(4, 8))
    t = FreqTensor.from_matrix(x, f12289, Domain.TIME)
    expected = dft_oracle_2d(x.tolist(), find_root_of_unity(4, f12289), find_root_of_unity(8, f12289), 12289)
    assert ntt_2d(t).matrix.tolist() == expected


def test_2d_round_trip(rng, f12289):
    x = rng.integers(0, 12289, size=(8, 16))
    t = FreqTensor.from_matrix(x, f12289, Domain.TIME)
    back = intt_2d(ntt_2d(t))
    assert back.domain == Domain.TIME
    assert np.array_equal(back.matrix, x)


def test_convolution_theorem_2d(rng, f12289):
    for _ in range(100):
        u = rng.integers(0, 12289, size=(4, 4))
        w = rng.integers(0, 12289, size=(4, 4))
        tu = ntt_2d(FreqTensor.from_matrix(u, f12289, Domain.TIME))
        tw = ntt_2d(FreqTensor.from_matrix(w, f12289, Domain.TIME))
        out = intt_2d(freq_hadamard(tu, tw))
        assert np.array_equal(out.matrix, cyclic_conv_oracle(u, w, f12289))


def test_domain_checks(f12289):
    t = FreqTensor.from_matrix(np.zeros((4, 4), dtype=np.int64), f12289, Domain.TIME)
    with pytest.raises(DomainMismatch):
        intt_2d(t)
    with pytest.raises(DomainMismatch):
        ntt_2d(ntt_2d(t))
    with pytest.raises(GeometryMismatch):
        freq_hadamard(t, t)


def test_hadamard_shape_mismatch(f12289):
    a = ntt_2d(FreqTensor.from_matrix(np.ones((4, 4), dtype=np.int64), f12289, Domain.TIME))
    b = ntt_2d(FreqTensor.from_matrix(np.ones((4, 8), dtype=np.int64), f12289, Domain.TIME))
    with pytest.raises(GeometryMismatch):
        freq_hadamard(a, b)


def test_tensor_rejects_length_not_dividing(f17):
    with pytest.raises(BadGeometry):
        FreqTensor.from_matrix(np.zeros((5, 5), dtype=np.int64), f17, Domain.TIME)


def test_tensor_is_read_only(f17):
    t = FreqTensor.from_matrix(np.zeros((4, 4), dtype=np.int64), f17, Domain.TIME)
    with pytest.raises(ValueError):
        t.data[0] = 1


# Geometry

def test_choose_length():
    assert choose_length(3, field_for(12289)) == 4
    assert choose_length(3, field_for(2311)) == 3
    assert choose_length(10, field_for(1153)) == 16
    with pytest.raises(BadGeometry):
        choose_length(20, field_for(17))


def test_valid_2x2_padding_depends_on_modulus():
    g = ConvGeometry.plan(2, 2, 2, 2, ConvType.VALID, field_for(2311))
    assert (g.padded_h, g.padded_w) == (3, 3)
    g = ConvGeometry.plan(2, 2, 2, 2, ConvType.VALID, field_for(12289))
    assert (g.padded_h, g.padded_w) == (4, 4)
    assert g.fast_path


def test_geometry_shapes(f12289):
    g = ConvGeometry.plan(28, 28, 5, 5, ConvType.SAME, f12289)
    assert (g.padded_h, g.padded_w) == (32, 32)
    assert (g.output_h, g.output_w) == (28, 28)
    assert g.offset == (2, 2)
    g = ConvGeometry.plan(28, 28, 5, 5, ConvType.VALID, f12289)
    assert (g.output_h, g.output_w) == (24, 24)
    assert g.offset == (4, 4)


def test_bad_geometry(f12289):
    with pytest.raises(BadGeometry):
        ConvGeometry.plan(2, 2, 3, 3, ConvType.VALID, f12289)
    with pytest.raises(BadGeometry):
        ConvGeometry.plan(0, 2, 1, 1, ConvType.SAME, f12289)


def test_conv_oracle_hand_example(f12289):
    g = ConvGeometry.plan(2, 2, 2, 2, ConvType.VALID, f12289)
    out = conv_oracle([[1, 2], [3, 4]], [[1, 0], [0, 1]], g, f12289)
    assert out.tolist() == [[5]]


def test_same_delta_kernel_is_identity(rng, f12289):
    u = rng.integers(-100, 100, size=(6, 6))
    g = ConvGeometry.plan(6, 6, 3, 3, ConvType.SAME, f12289)
    delta = [[0, 0, 0], [0, 1, 0], [0, 0, 0]]
    assert np.array_equal(decode_signed(conv_oracle(u, delta, g, f12289), f12289), u)


@pytest.mark.parametrize("conv_type", [ConvType.SAME, ConvType.VALID])
@pytest.mark.parametrize("modulus", [12289, 2311])
def test_frequency_convolution_matches_oracle(rng, conv_type, modulus):
    f = field_for(modulus)
    for shape in [(5, 5, 3, 3), (8, 6, 3, 2), (7, 7, 5, 5)]:
        h, w, fh, fw = shape
        g = ConvGeometry.plan(h, w, fh, fw, conv_type, f)
        u = rng.integers(-20, 20, size=(h, w))
        k = rng.integers(-5, 5, size=(fh, fw))
        freq = freq_hadamard(ntt_2d(pad_image(u, g, f)), ntt_2d(pad_filter(k, g, f)))
        got = crop_output(intt_2d(freq), g)
        assert np.array_equal(got, conv_oracle(u, k, g, f))


def test_pad_image_rejects_wrong_shape(f12289):
    g = ConvGeometry.plan(4, 4, 3, 3, ConvType.SAME, f12289)
    with pytest.raises(BadGeometry):
        pad_image(np.zeros((3, 4)), g, f12289)


# Encoding and blocks

def test_signed_encoding_round_trip(f12289):
    values = np.array([-6144, -1, 0, 1, 6144])
    assert np.array_equal(decode_signed(encode_signed(values, f12289), f12289), values)


def test_block_count():
    assert block_count(64, 64, 2048) == 2
    assert block_count(32, 32, 2048) == 1
    assert block_count(10, 10, 16) == 7


def test_flatten_round_trip(rng, f12289):
    x = rng.integers(1, 12289, size=(4, 6))
    t = FreqTensor.from_matrix(x, f12289, Domain.FREQUENCY)
    blocks = flatten_blocks(t, 16)
    assert len(blocks) == 2
    assert all(len(b) == 16 for b in blocks)
    assert not np.any(blocks[-1][8:])
    back = unflatten_blocks(blocks, 4, 6, f12289)
    assert np.array_equal(back.matrix, x)


def test_unflatten_rejects_wrong_count(f12289):
    blocks = [np.zeros(16, dtype=np.int64)] * 2
    with pytest.raises(GeometryMismatch):
        unflatten_blocks(blocks, 8, 8, f12289)


# Larger randomized checks

@pytest.mark.parametrize("modulus", [12289, 147457])
def test_radix2_matches_direct_path(rng, modulus):
    f = field_for(modulus)
    for log_length in range(1, 9):
        length = 1 << log_length
        omega = find_root_of_unity(length, f)
        x = rng.integers(0, modulus, size=(4, length))
        assert uses_fast_path(length, f)
        assert np.array_equal(ntt_batch(x, omega, f), ntt_batch(x, omega, f, force_direct=True))


@pytest.mark.parametrize("length", [8, 12, 64])
def test_linearity(rng, f12289, length):
    omega = find_root_of_unity(length, f12289)
    x = rng.integers(0, 12289, size=(50, length))
    y = rng.integers(0, 12289, size=(50, length))
    a, b = 7, 12000
    combined = ntt_1d((a * x + b * y) % 12289, omega, f12289)
    separate = (a * ntt_1d(x, omega, f12289) + b * ntt_1d(y, omega, f12289)) % 12289
    assert np.array_equal(combined, separate)


def test_round_trip_many_vectors_medium_modulus(rng):
    f = field_for(147457)
    omega = find_root_of_unity(64, f)
    x = rng.integers(0, 147457, size=(1000, 64))
    assert np.array_equal(intt_1d(ntt_1d(x, omega, f), omega, f), x)


@pytest.mark.parametrize("length", [8, 12])
def test_convolution_theorem_1d_batch(rng, f12289, length):
    omega = find_root_of_unity(length, f12289)
    a = rng.integers(0, 12289, size=(1000, length))
    b = rng.integers(0, 12289, size=(1000, length))
    product = ntt_1d(a, omega, f12289) * ntt_1d(b, omega, f12289) % 12289
    # circulant[:, k, j] = b[:, (k - j) mod L]
    index = (np.arange(length)[:, None] - np.arange(length)[None, :]) % length
    expected = np.einsum("rj,rkj->rk", a, b[:, index]) % 12289
    assert np.array_equal(intt_1d(product, omega, f12289), expected)


def test_convolution_theorem_2d_many(rng, f12289):
    for _ in range(1000):
        u = rng.integers(0, 12289, size=(4, 3))
        w = rng.integers(0, 12289, size=(4, 3))
        tu = ntt_2d(FreqTensor.from_matrix(u, f12289, Domain.TIME))
        tw = ntt_2d(FreqTensor.from_matrix(w, f12289, Domain.TIME))
        assert np.array_equal(intt_2d(freq_hadamard(tu, tw)).matrix, cyclic_conv_oracle(u, w, f12289))
