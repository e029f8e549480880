"""Disjoint Set Sum: subset convolution over (set, value) pairs.

For grids ``f, g`` indexed by ``(S, v)`` with ``0 <= v <= m``,

    h(S, t) = sum_{T subset of S} sum_{i + j = t} f(T, i) * g(S \\ T, j),   t <= 2m.

The FFT route flattens each grid to one sequence with index ``S * W + v``,
where ``W`` is the smallest power of two above ``2m``.  Adding two such
indices adds the value fields without a carry into the subset field, so one
cyclic FFT of length ``2**n * W`` per rank handles sets and values at once.
Accumulating ``sum_i F_i * G_{k-i}`` before a single inverse per rank k
needs ``n + 1`` inverse transforms instead of one per rank pair.
"""

from __future__ import annotations

import numpy as np

from . import config, fftcore
from .convolution import round_checked
from .rng import splitmix64
from .setfn import ScalarKind, log2_exact, popcounts


class IndexedSetFunction:
    """Immutable ``2**n x (m + 1)`` grid; entry ``(S, v)`` weighs the pair (set S, value v)."""

    __slots__ = ("n", "m", "values", "kind")

    def __init__(self, values, kind: ScalarKind | None = None):
        arr = np.asarray(values)
        if arr.ndim != 2 or arr.shape[1] < 1:
            raise ValueError(f"expected a 2**n x (m+1) grid, got shape {arr.shape}")
        n = log2_exact(arr.shape[0])
        config.check_n(n)
        if kind is None:
            kind = "int" if arr.dtype.kind in "biu" else "float"
        dtype = {"int": np.int64, "float": np.float64}[kind]
        out = np.array(arr, dtype=dtype, copy=True)
        out.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "m", arr.shape[1] - 1)
        object.__setattr__(self, "values", out)
        object.__setattr__(self, "kind", kind)

    def __setattr__(self, name, value):
        raise AttributeError("IndexedSetFunction is immutable")

    @classmethod
    def zeros(cls, n: int, m: int, kind: ScalarKind = "int") -> IndexedSetFunction:
        return cls(np.zeros((1 << n, m + 1), dtype=np.int64 if kind == "int" else np.float64), kind)

    @classmethod
    def unit(cls, n: int, m: int, kind: ScalarKind = "int") -> IndexedSetFunction:
        grid = np.zeros((1 << n, m + 1), dtype=np.int64 if kind == "int" else np.float64)
        grid[0, 0] = 1
        return cls(grid, kind)

    def __eq__(self, other):
        if not isinstance(other, IndexedSetFunction):
            return NotImplemented
        return self.kind == other.kind and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.kind, self.values.shape, self.values.tobytes()))

    def __repr__(self):
        return f"IndexedSetFunction(n={self.n}, m={self.m}, kind={self.kind!r})"


def value_field_width(m: int) -> int:
    """Smallest power of two strictly greater than ``2m``."""
    return 1 << (2 * m).bit_length()


def _check_pair(f: IndexedSetFunction, g: IndexedSetFunction) -> None:
    if f.n != g.n or f.m != g.m:
        raise ValueError(f"dimension mismatch: f is (n={f.n}, m={f.m}), g is (n={g.n}, m={g.m})")


def disjoint_set_sum_naive(f: IndexedSetFunction, g: IndexedSetFunction) -> IndexedSetFunction:
    """Direct enumeration: descending submask loop, then the value convolution per pair."""
    _check_pair(f, g)
    kind = "int" if f.kind == g.kind == "int" else "float"
    dtype = np.int64 if kind == "int" else np.float64
    fv = f.values.astype(dtype)
    gv = g.values.astype(dtype)
    out = np.zeros((1 << f.n, 2 * f.m + 1), dtype=dtype)
    for s in range(1 << f.n):
        t = s
        while True:
            out[s] += np.convolve(fv[t], gv[s ^ t])
            if t == 0:
                break
            t = (t - 1) & s
    return IndexedSetFunction(out, kind)


def embed(values: np.ndarray, width: int) -> np.ndarray:
    """Flatten a ``(2**n, m+1)`` grid into a sequence indexed by ``S * width + v``."""
    rows, cols = values.shape
    flat = np.zeros((rows, width), dtype=values.dtype)
    flat[:, :cols] = values
    return flat.reshape(rows * width)


def disjoint_set_sum_fft(f: IndexedSetFunction, g: IndexedSetFunction) -> IndexedSetFunction:
    """FFT evaluation over the combined subset x value index; float result.

    Use :func:`round_indexed` for integer answers.
    """
    _check_pair(f, g)
    n, m = f.n, f.m
    width = value_field_width(m)
    length = (1 << n) * width
    limit = config.max_n()
    if length > 1 << limit:
        raise ValueError(f"combined length 2**{n} * {width} exceeds the limit 2**{limit}")
    pc = popcounts(n)
    f_spec = np.empty((n + 1, length), dtype=np.complex128)
    g_spec = np.empty_like(f_spec)
    for i in range(n + 1):
        keep = (pc == i)[:, None]
        f_spec[i] = fftcore.transform(embed(np.where(keep, f.values, 0), width))
        g_spec[i] = fftcore.transform(embed(np.where(keep, g.values, 0), width))
    out = np.zeros((1 << n, 2 * m + 1), dtype=np.float64)
    acc = np.empty(length, dtype=np.complex128)
    for k in range(n + 1):
        acc.fill(0)
        for i in range(k + 1):
            acc += f_spec[i] * g_spec[k - i]
        hk = fftcore.transform(acc, inverse=True).real.reshape(1 << n, width)
        mask = pc == k
        out[mask] = hk[mask, : 2 * m + 1]
    return IndexedSetFunction(out, "float")


def round_indexed(h: IndexedSetFunction) -> tuple[IndexedSetFunction, float]:
    """Nearest-integer grid and the largest rounding deviation (0.25 threshold)."""
    if h.kind == "int":
        return h, 0.0
    rounded, deviation = round_checked(h.values)
    return IndexedSetFunction(rounded, "int"), deviation


def random_indexed(n: int, m: int, seed: int, value_bound: int = 1) -> IndexedSetFunction:
    """Seeded integer grid with entries in ``[-value_bound, value_bound]`` (SplitMix64)."""
    raw = splitmix64(seed, (1 << n) * (m + 1)) % np.uint64(2 * value_bound + 1)
    return IndexedSetFunction((raw.astype(np.int64) - value_bound).reshape(1 << n, m + 1), "int")
