"""Zeta and Moebius transforms on the subset lattice (Yates' n-pass sweep)."""

import numpy as np

from .setfn import SetFunction, log2_exact


def _sweep(arr: np.ndarray, subtract: bool) -> np.ndarray:
    # arr is modified in place along its last axis; leading axes are batched
    size = arr.shape[-1]
    n = log2_exact(size)
    lead = arr.shape[:-1]
    for b in range(n):
        half = 1 << b
        v = arr.reshape(*lead, size // (2 * half), 2, half)
        if subtract:
            v[..., 1, :] -= v[..., 0, :]
        else:
            v[..., 1, :] += v[..., 0, :]
    return arr


def zeta_array(values: np.ndarray) -> np.ndarray:
    """``out[..., S] = sum(values[..., T] for T subset of S)`` as a fresh array."""
    return _sweep(np.array(values, copy=True), subtract=False)


def mobius_array(values: np.ndarray) -> np.ndarray:
    """Inverse of :func:`zeta_array`, by the same sweep with subtraction."""
    return _sweep(np.array(values, copy=True), subtract=True)


INT64_MAX = int(np.iinfo(np.int64).max)


def _check_int_range(f: SetFunction) -> None:
    # both sweeps keep every partial sum within 2**n * max|f|
    if f.kind == "int" and f.n and (int(np.abs(f.values).max()) << f.n) > INT64_MAX:
        raise ValueError(f"int64 overflow possible: 2**{f.n} * max|f| exceeds the int64 range")


def zeta(f: SetFunction) -> SetFunction:
    _check_int_range(f)
    return SetFunction(zeta_array(f.values), f.kind)


def mobius(f: SetFunction) -> SetFunction:
    _check_int_range(f)
    return SetFunction(mobius_array(f.values), f.kind)
