"""Set functions on the subset lattice of order n.

A subset S of [n] = {1, ..., n} is stored as the bitmask with bit i-1 set
iff element i is in S, so index 0 is the empty set, index 2**n - 1 is [n]
and the popcount of an index is the cardinality of the subset.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Literal, Sequence

import numpy as np

from . import config
from .rng import splitmix64, uniform01

ScalarKind = Literal["int", "float"]

_DTYPES = {"int": np.dtype(np.int64), "float": np.dtype(np.float64)}


@lru_cache(maxsize=None)
def _popcounts(n: int) -> np.ndarray:
    pc = np.zeros(1 << n, dtype=np.int8)
    idx = np.arange(1 << n, dtype=np.int64)
    for b in range(n):
        pc += ((idx >> b) & 1).astype(np.int8)
    pc.setflags(write=False)
    return pc


def popcounts(n: int) -> np.ndarray:
    """Read-only array of ``popcount(S)`` for ``S`` in ``0 .. 2**n - 1``."""
    return _popcounts(n)


def log2_exact(length: int) -> int:
    if length < 1 or length & (length - 1):
        raise ValueError(f"length {length} is not a power of two")
    return length.bit_length() - 1


def _infer_kind(arr: np.ndarray) -> ScalarKind:
    if arr.dtype.kind in "biu":
        return "int"
    if arr.dtype.kind == "f":
        return "float"
    if arr.dtype.kind == "O" and all(isinstance(v, (int, np.integer)) for v in arr.flat):
        return "int"
    raise TypeError(f"unsupported scalar dtype {arr.dtype}")


class SetFunction:
    """Immutable dense set function ``values[S] = f(S)``.

    ``kind`` is ``"int"`` (int64, exact) or ``"float"`` (float64); when
    omitted it is inferred from the input dtype.
    """

    __slots__ = ("n", "values", "kind")

    n: int
    values: np.ndarray
    kind: ScalarKind

    def __init__(self, values: Iterable | np.ndarray, kind: ScalarKind | None = None):
        arr = np.asarray(values)
        if arr.ndim != 1:
            raise ValueError(f"set function values must be one-dimensional, got shape {arr.shape}")
        n = log2_exact(arr.shape[0])
        config.check_n(n)
        if kind is None:
            kind = _infer_kind(arr)
        if kind not in _DTYPES:
            raise ValueError(f"unknown scalar kind {kind!r}")
        if kind == "int" and arr.dtype.kind == "f" and not np.all(arr == np.round(arr)):
            raise ValueError("non-integral values for an int set function")
        out = np.array(arr, dtype=_DTYPES[kind], copy=True)
        out.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "values", out)
        object.__setattr__(self, "kind", kind)

    def __setattr__(self, name, value):
        raise AttributeError("SetFunction is immutable")

    @classmethod
    def zeros(cls, n: int, kind: ScalarKind = "int") -> SetFunction:
        return cls(np.zeros(1 << n, dtype=_DTYPES[kind]), kind)

    @classmethod
    def unit(cls, n: int, kind: ScalarKind = "int") -> SetFunction:
        """Identity of subset convolution: 1 on the empty set, 0 elsewhere."""
        v = np.zeros(1 << n, dtype=_DTYPES[kind])
        v[0] = 1
        return cls(v, kind)

    def astype(self, kind: ScalarKind) -> SetFunction:
        return self if kind == self.kind else SetFunction(self.values, kind)

    def __len__(self) -> int:
        return self.values.shape[0]

    def __getitem__(self, index):
        return self.values[index]

    def __eq__(self, other):
        if not isinstance(other, SetFunction):
            return NotImplemented
        return self.kind == other.kind and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.kind, self.values.tobytes()))

    def __repr__(self):
        return f"SetFunction(n={self.n}, kind={self.kind!r}, values={self.values.tolist()!r})"


class RankedFamily:
    """The chopped copies ``f^(0), ..., f^(n)`` of a set function.

    Members are not required to satisfy the rank-support invariant here;
    :func:`chop` guarantees it, :func:`assemble` does not need it.
    """

    __slots__ = ("n", "ranks")

    def __init__(self, ranks: Sequence[SetFunction]):
        ranks = tuple(ranks)
        if not ranks:
            raise ValueError("a ranked family needs at least one member")
        n = ranks[0].n
        if any(r.n != n for r in ranks):
            raise ValueError("ranked family members have mismatched sizes")
        if len(ranks) != n + 1:
            raise ValueError(f"expected {n + 1} members for n={n}, got {len(ranks)}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "ranks", ranks)

    def __setattr__(self, name, value):
        raise AttributeError("RankedFamily is immutable")

    def __len__(self):
        return len(self.ranks)

    def __getitem__(self, i: int) -> SetFunction:
        return self.ranks[i]

    def __iter__(self):
        return iter(self.ranks)

    def __eq__(self, other):
        if not isinstance(other, RankedFamily):
            return NotImplemented
        return self.ranks == other.ranks

    def as_array(self) -> np.ndarray:
        return np.stack([r.values for r in self.ranks])


def chop_array(values: np.ndarray) -> np.ndarray:
    """``(n+1, 2**n)`` array whose row i keeps only the entries of popcount i."""
    n = log2_exact(values.shape[-1])
    pc = popcounts(n)
    out = np.zeros((n + 1, values.shape[-1]), dtype=values.dtype)
    for i in range(n + 1):
        mask = pc == i
        out[i, mask] = values[mask]
    return out


def chop(f: SetFunction) -> RankedFamily:
    return RankedFamily([SetFunction(row, f.kind) for row in chop_array(f.values)])


def clean_rank(h: SetFunction, k: int) -> SetFunction:
    """Zero every entry of ``h`` whose subset does not have cardinality ``k``."""
    if not 0 <= k <= h.n:
        raise ValueError(f"rank k={k} outside 0..{h.n}")
    out = np.where(popcounts(h.n) == k, h.values, 0).astype(h.values.dtype)
    return SetFunction(out, h.kind)


def assemble(family: RankedFamily | Sequence[SetFunction]) -> SetFunction:
    members = list(family)
    if not members:
        raise ValueError("cannot assemble an empty family")
    size = len(members[0])
    if any(len(m) != size for m in members):
        raise ValueError("family members have mismatched sizes")
    kind: ScalarKind = "float" if any(m.kind == "float" for m in members) else "int"
    total = np.zeros(size, dtype=_DTYPES[kind])
    for m in members:
        total += m.values
    return SetFunction(total, kind)


def random_instance(
    n: int,
    seed: int,
    value_bound: int | float = 50,
    scalar_kind: ScalarKind = "int",
) -> SetFunction:
    """Seeded random set function with values in ``[-value_bound, value_bound]``.

    Draws come from the SplitMix64 stream of ``seed``: one output per entry,
    reduced modulo ``2*value_bound + 1`` for ints (bias below 2**-50 for
    bounds used here) or mapped to ``value_bound * (2u - 1)`` for floats.
    """
    config.check_n(n)
    if not value_bound > 0:
        raise ValueError("value_bound must be positive")
    size = 1 << n
    if scalar_kind == "int":
        bound = int(value_bound)
        if bound != value_bound:
            raise ValueError("integer instances need an integral value_bound")
        raw = splitmix64(seed, size) % np.uint64(2 * bound + 1)
        return SetFunction(raw.astype(np.int64) - bound, "int")
    if scalar_kind == "float":
        u = uniform01(seed, size)
        return SetFunction(value_bound * (2.0 * u - 1.0), "float")
    raise ValueError(f"unknown scalar kind {scalar_kind!r}")
