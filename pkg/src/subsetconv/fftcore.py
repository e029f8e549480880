"""Power-of-two FFT in complex double precision.

Iterative radix-2 decimation in time: a bit-reversal permutation followed by
log2(N) butterfly stages, each stage vectorized over all butterflies (and
over any leading batch axes).  Forward is unnormalized,
``X[j] = sum_t x[t] exp(-2 pi i j t / N)``; inverse applies ``1/N``.

Twiddle tables are built once per length from ``cos``/``sin`` of
``2 pi j / N`` (no recurrences) and cached behind a lock.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .setfn import log2_exact

Direction = Literal["forward", "inverse"]


@dataclass(frozen=True)
class _Plan:
    bitrev: np.ndarray
    forward: tuple[np.ndarray, ...]
    inverse: tuple[np.ndarray, ...]


_plans: dict[int, _Plan] = {}
_plans_lock = threading.Lock()


def _bit_reversal(bits: int) -> np.ndarray:
    idx = np.arange(1 << bits, dtype=np.int64)
    rev = np.zeros_like(idx)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev


def _build_plan(size: int) -> _Plan:
    bits = log2_exact(size)
    angle = 2.0 * np.pi * np.arange(size // 2, dtype=np.float64) / size
    base = np.cos(angle) - 1j * np.sin(angle)
    forward, inverse = [], []
    half = 1
    while half < size:
        tw = np.ascontiguousarray(base[:: size // (2 * half)][:half])
        tw.setflags(write=False)
        conj = np.conj(tw)
        conj.setflags(write=False)
        forward.append(tw)
        inverse.append(conj)
        half *= 2
    rev = _bit_reversal(bits)
    rev.setflags(write=False)
    return _Plan(rev, tuple(forward), tuple(inverse))


def _plan(size: int) -> _Plan:
    plan = _plans.get(size)
    if plan is None:
        with _plans_lock:
            plan = _plans.get(size)
            if plan is None:
                plan = _build_plan(size)
                _plans[size] = plan
    return plan


def transform(x, inverse: bool = False) -> np.ndarray:
    """DFT along the last axis of ``x``; returns a new complex128 array."""
    x = np.asarray(x)
    if x.ndim == 0:
        raise ValueError("transform needs at least one axis")
    size = x.shape[-1]
    log2_exact(size)
    plan = _plan(size)
    y = np.ascontiguousarray(x[..., plan.bitrev], dtype=np.complex128)
    lead = y.shape[:-1]
    scratch = np.empty(lead + (size // 2,), dtype=np.complex128)
    twiddles = plan.inverse if inverse else plan.forward
    half = 1
    for tw in twiddles:
        blocks = size // (2 * half)
        v = y.reshape(*lead, blocks, 2, half)
        even = v[..., 0, :]
        odd = v[..., 1, :]
        t = scratch.reshape(*lead, blocks, half)
        if half == 1:
            t[...] = odd
        else:
            np.multiply(odd, tw, out=t)
        np.subtract(even, t, out=odd)
        np.add(even, t, out=even)
        half *= 2
    if inverse:
        y /= size
    return y


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Length-N complex array in the frequency domain, N a power of two."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.complex128, copy=True)
        if arr.ndim != 1:
            raise ValueError("a spectrum is one-dimensional")
        log2_exact(arr.shape[0])
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def len(self) -> int:
        return self.values.shape[0]

    def __len__(self):
        return self.values.shape[0]

    @classmethod
    def zeros(cls, size: int) -> Spectrum:
        return cls(np.zeros(size, dtype=np.complex128))


def fft(x, direction: Direction = "forward") -> Spectrum:
    if isinstance(x, Spectrum):
        x = x.values
    if direction not in ("forward", "inverse"):
        raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")
    x = np.asarray(x)
    if x.ndim != 1:
        raise ValueError("fft expects a one-dimensional sequence")
    return Spectrum(transform(x, inverse=direction == "inverse"))


def pointwise_mul_add(acc: Spectrum, a: Spectrum, b: Spectrum) -> Spectrum:
    """``acc + a * b`` as a new spectrum."""
    if not len(acc) == len(a) == len(b):
        raise ValueError(f"spectrum lengths differ: {len(acc)}, {len(a)}, {len(b)}")
    return Spectrum(acc.values + a.values * b.values)


def next_pow2(length: int) -> int:
    return 1 if length <= 1 else 1 << (length - 1).bit_length()


def sequence_convolve(x, y, mode: Literal["cyclic", "linear"] = "linear") -> np.ndarray:
    """Cyclic or linear convolution of two sequences through the FFT.

    Real inputs give a real result; nothing is rounded.
    """
    x = np.asarray(x)
    y = np.asarray(y)
    if x.ndim != 1 or y.ndim != 1 or x.size == 0 or y.size == 0:
        raise ValueError("sequence_convolve expects two non-empty 1-D sequences")
    real = not (np.iscomplexobj(x) or np.iscomplexobj(y))
    if mode == "cyclic":
        if x.size != y.size:
            raise ValueError(f"cyclic convolution needs equal lengths, got {x.size} and {y.size}")
        log2_exact(x.size)
        out = transform(transform(x) * transform(y), inverse=True)
    elif mode == "linear":
        out_len = x.size + y.size - 1
        size = next_pow2(out_len)
        xp = np.zeros(size, dtype=np.complex128)
        yp = np.zeros(size, dtype=np.complex128)
        xp[: x.size] = x
        yp[: y.size] = y
        out = transform(transform(xp) * transform(yp), inverse=True)[:out_len]
    else:
        raise ValueError(f"mode must be 'cyclic' or 'linear', got {mode!r}")
    return out.real.copy() if real else out
