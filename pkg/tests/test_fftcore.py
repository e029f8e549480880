import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from subsetconv.fftcore import Spectrum, fft, pointwise_mul_add, sequence_convolve, transform
from subsetconv.rng import uniform01


def unit_complex(seed, size):
    u = uniform01(seed, 2 * size)
    return (2 * u[:size] - 1) + 1j * (2 * u[size:] - 1)


def test_delta_and_constant():
    assert np.allclose(fft([1, 0, 0, 0]).values, [1, 1, 1, 1], atol=0)
    assert np.allclose(fft([1, 1, 1, 1]).values, [4, 0, 0, 0], atol=1e-15)


def test_sign_convention():
    # x[t] = exp(2 pi i t / N) concentrates on bin 1 under exp(-2 pi i j t / N)
    size = 8
    x = np.exp(2j * np.pi * np.arange(size) / size)
    X = fft(x).values
    assert abs(X[1] - size) < 1e-12
    assert np.max(np.abs(np.delete(X, 1))) < 1e-12


@pytest.mark.parametrize("bits", range(0, 9))
def test_matches_naive_dft(bits):
    x = unit_complex(bits, 1 << bits)
    ref = np.array(oracles.dft(list(x))) if bits <= 6 else None
    if ref is None:
        t = np.arange(1 << bits)
        ref = np.exp(-2j * np.pi * np.outer(t, t) / (1 << bits)) @ x
    assert np.max(np.abs(fft(x).values - ref)) <= 1e-10


@pytest.mark.parametrize("bits", [0, 1, 5, 10, 16])
def test_roundtrip(bits):
    x = unit_complex(100 + bits, 1 << bits)
    assert np.max(np.abs(fft(fft(x), "inverse").values - x)) <= 1e-12


def test_parseval():
    x = unit_complex(9, 1 << 14)
    lhs = np.sum(np.abs(x) ** 2)
    rhs = np.sum(np.abs(fft(x).values) ** 2) / x.size
    assert abs(lhs - rhs) <= 1e-12 * lhs


def test_batched_rows_match_single():
    x = unit_complex(3, 4 * 64).reshape(4, 64)
    batched = transform(x)
    for row, out in zip(x, batched):
        assert np.array_equal(transform(row), out)


def test_deterministic():
    x = unit_complex(5, 1024)
    assert np.array_equal(fft(x).values, fft(x).values)


def test_input_not_modified():
    x = unit_complex(5, 16)
    keep = x.copy()
    fft(x)
    transform(x, inverse=True)
    assert np.array_equal(x, keep)


@pytest.mark.parametrize("bad", [[], [1, 2, 3], np.zeros(6)])
def test_rejects_non_power_of_two(bad):
    with pytest.raises(ValueError):
        fft(bad)


def test_rejects_bad_direction():
    with pytest.raises(ValueError):
        fft([1, 0], "backward")


def test_spectrum_validation():
    assert Spectrum([1, 2]).len == 2
    with pytest.raises(ValueError):
        Spectrum([1, 2, 3])


def test_pointwise_mul_add():
    acc = Spectrum.zeros(2)
    assert np.array_equal(pointwise_mul_add(acc, Spectrum([1, 1]), Spectrum([2, 3])).values, [2, 3])
    assert np.array_equal(
        pointwise_mul_add(Spectrum([1, 1]), Spectrum([0, 0]), Spectrum([7 + 1j, -2])).values, [1, 1]
    )
    with pytest.raises(ValueError):
        pointwise_mul_add(Spectrum.zeros(2), Spectrum.zeros(4), Spectrum.zeros(2))


def test_pointwise_accumulation_is_linear():
    a, b, c = (Spectrum(unit_complex(s, 8)) for s in (1, 2, 3))
    twice = pointwise_mul_add(pointwise_mul_add(Spectrum.zeros(8), a, b), a, c)
    once = pointwise_mul_add(Spectrum.zeros(8), a, Spectrum(b.values + c.values))
    assert np.max(np.abs(twice.values - once.values)) < 1e-15


def test_sequence_convolve_examples():
    assert np.allclose(sequence_convolve([1, 2], [3, 4], "linear"), [3, 10, 8], atol=1e-12)
    y = np.array([0.5, -1.0, 2.0, 3.0])
    assert np.allclose(sequence_convolve([1, 0, 0, 0], y, "cyclic"), y, atol=1e-15)
    x = np.array([1.0, 2.0, -3.0])
    assert np.allclose(sequence_convolve(x, [1], "linear"), x, atol=1e-15)


def test_sequence_convolve_errors():
    with pytest.raises(ValueError):
        sequence_convolve([1, 2], [1, 2, 3, 4], "cyclic")
    with pytest.raises(ValueError):
        sequence_convolve([1, 2, 3], [1, 2, 3], "cyclic")
    with pytest.raises(ValueError):
        sequence_convolve([1], [1], "circular")


@given(
    st.lists(st.integers(-100, 100), min_size=1, max_size=40),
    st.lists(st.integers(-100, 100), min_size=1, max_size=40),
)
def test_linear_matches_schoolbook(x, y):
    got = sequence_convolve(x, y, "linear")
    assert np.max(np.abs(got - oracles.linear_convolution(x, y))) < 1e-9


@pytest.mark.parametrize("bits", [0, 3, 8, 12])
def test_convolution_theorem(bits):
    size = 1 << bits
    x = unit_complex(10 + bits, size).real
    y = unit_complex(20 + bits, size).real
    cyc = sequence_convolve(x, y, "cyclic")
    direct = np.array([np.dot(x, np.roll(y[::-1], s + 1)) for s in range(size)])
    assert np.max(np.abs(cyc - direct)) <= 1e-9


def test_complex_inputs_stay_complex():
    out = sequence_convolve([1j, 0], [1, 1], "cyclic")
    assert np.iscomplexobj(out)
    assert np.allclose(out, [1j, 1j])
