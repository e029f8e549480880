"""Subset convolution ``(f * g)(S) = sum over T subset of S of f(T) g(S minus T)``.

Three interchangeable engines:

* ``naive``: submask enumeration, O(3^n) products.
* ``zeta``: ranked zeta transforms, rank convolution, Moebius, O(2^n n^2).
* ``fft``: transform-free; chop both inputs by cardinality, FFT every rank
  at length 2^n (cyclic, unpadded), accumulate
  ``sum_i F_i * G_{k-i}`` per target rank k, one inverse FFT per k, keep only
  entries of cardinality k and add up.  O(2^n n^2).

Integer inputs are exact on ``naive`` and ``zeta`` (int64, bounds checked
upfront).  ``fft`` always computes in complex double precision; use
:func:`round_to_integers` to recover exact integer answers.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from . import fftcore
from .setfn import SetFunction, chop_array, popcounts
from .transforms import mobius_array, zeta_array

INT64_MAX = int(np.iinfo(np.int64).max)
ROUNDING_THRESHOLD = 0.25

# rank rows transformed per batch; larger batches fall out of cache
_BATCH_ENTRIES = 1 << 17


class RoundingUnsafeError(ArithmeticError):
    """An FFT result lies too far from every integer to be rounded safely."""

    def __init__(self, deviation: float, index: int):
        super().__init__(
            f"entry {index} deviates {deviation:.3g} from the nearest integer "
            f"(threshold {ROUNDING_THRESHOLD})"
        )
        self.deviation = deviation
        self.index = index


@dataclass
class RunReport:
    """Timing and error metrics of one engine run; ``None`` means not measured."""

    algo: str
    n: int
    wall_time_ns: int = 0
    max_abs_err: float | None = None
    max_rel_err: float | None = None
    rounding_max_deviation: float | None = None
    max_imag: float | None = None
    max_intermediate_magnitude: float | None = None

    def __post_init__(self):
        if self.wall_time_ns < 0:
            raise ValueError("wall_time_ns must be non-negative")
        for name in ("max_abs_err", "max_rel_err", "rounding_max_deviation", "max_imag"):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise ValueError(f"{name} must be non-negative")

    def as_dict(self) -> dict:
        return asdict(self)

    def format_line(self) -> str:
        parts = [f"algo={self.algo}", f"n={self.n}", f"wall_time_ns={self.wall_time_ns}"]
        for key, value in asdict(self).items():
            if key in ("algo", "n", "wall_time_ns") or value is None:
                continue
            parts.append(f"{key}={value:.6g}")
        return " ".join(parts)


def _check_pair(f: SetFunction, g: SetFunction) -> None:
    if f.n != g.n:
        raise ValueError(f"dimension mismatch: f has n={f.n}, g has n={g.n}")


def _max_abs(values: np.ndarray) -> int:
    return int(np.abs(values).max()) if values.size else 0


def _check_int_bound(f: SetFunction, g: SetFunction, factor: int, what: str) -> None:
    if f.kind != "int" or g.kind != "int":
        return
    bound = factor * _max_abs(f.values) * _max_abs(g.values)
    if bound > INT64_MAX:
        raise ValueError(f"int64 overflow possible in {what}: bound {bound} exceeds {INT64_MAX}")


def _common_dtype(f: SetFunction, g: SetFunction):
    return np.int64 if f.kind == g.kind == "int" else np.float64


def submask_steps(n: int):
    """Vectorized descending submask enumeration over every S at once.

    Yields ``(m, sets, subs)`` once per step: ``sets[:m]`` are the subsets
    still enumerating and ``subs[:m]`` their current submask T, visited in
    the order ``S, (S-1) & S, ..., 0``.  Subsets are ordered by decreasing
    popcount, so the active ones always form a prefix.  Over all steps
    exactly 3**n pairs (S, T) are produced.
    """
    size = 1 << n
    pc = popcounts(n).astype(np.int64)
    sets = np.argsort(-pc, kind="stable").astype(np.int64)
    # active[q] = number of subsets with popcount >= q
    active = np.cumsum(np.bincount(pc, minlength=n + 1)[::-1])[::-1]
    subs = sets.copy()
    q = 0
    for t in range(size):
        while (1 << q) <= t:
            q += 1
        m = int(active[q])
        yield m, sets, subs
        np.bitwise_and(subs[:m] - 1, sets[:m], out=subs[:m])


def naive_kernel(fv: np.ndarray, gv: np.ndarray) -> np.ndarray:
    """Submask-enumeration subset convolution on raw arrays of any dtype."""
    n = fv.shape[0].bit_length() - 1
    acc = np.zeros(fv.shape[0], dtype=np.result_type(fv, gv))
    sets = None
    for m, sets, subs in submask_steps(n):
        s_m, t_m = sets[:m], subs[:m]
        acc[:m] += fv[t_m] * gv[s_m ^ t_m]
    out = np.empty_like(acc)
    out[sets] = acc
    return out


def subset_convolve_naive(f: SetFunction, g: SetFunction, report: RunReport | None = None) -> SetFunction:
    _check_pair(f, g)
    _check_int_bound(f, g, 1 << f.n, "the naive engine")
    dtype = _common_dtype(f, g)
    h = naive_kernel(f.values.astype(dtype), g.values.astype(dtype))
    return SetFunction(h, "int" if dtype is np.int64 else "float")


def ranked_zeta_products(f: SetFunction, g: SetFunction) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Ranked zeta transforms of both inputs and their rank convolution.

    Returns ``(zf, zg, p)`` with ``p[k] = sum_i zf[i] * zg[k - i]``, each of
    shape ``(n + 1, 2**n)``.
    """
    dtype = _common_dtype(f, g)
    zf = zeta_array(chop_array(f.values.astype(dtype)))
    zg = zeta_array(chop_array(g.values.astype(dtype)))
    n = f.n
    p = np.zeros_like(zf)
    for k in range(n + 1):
        for i in range(k + 1):
            p[k] += zf[i] * zg[k - i]
    return zf, zg, p


def subset_convolve_zeta(f: SetFunction, g: SetFunction, report: RunReport | None = None) -> SetFunction:
    _check_pair(f, g)
    _check_int_bound(f, g, (f.n + 1) << (2 * f.n), "the zeta engine")
    zf, zg, p = ranked_zeta_products(f, g)
    if report is not None:
        report.max_intermediate_magnitude = float(
            max(np.abs(zf).max(), np.abs(zg).max(), np.abs(p).max())
        )
    h_ranks = mobius_array(p)
    pc = popcounts(f.n)
    h = np.take_along_axis(h_ranks, pc.astype(np.intp)[None, :], axis=0)[0]
    return SetFunction(h, f.kind if f.kind == g.kind else "float")


def _rank_spectra(values: np.ndarray) -> np.ndarray:
    ranks = chop_array(values)
    size = ranks.shape[1]
    out = np.empty(ranks.shape, dtype=np.complex128)
    step = max(1, _BATCH_ENTRIES // size)
    for start in range(0, ranks.shape[0], step):
        out[start : start + step] = fftcore.transform(ranks[start : start + step])
    return out


def _iter_rank_products(f: SetFunction, g: SetFunction, stats: dict | None = None):
    """Yield ``(k, h_k)`` where ``h_k`` is the inverse FFT of the rank-k accumulator."""
    fs = _rank_spectra(f.values.astype(np.float64))
    gs = _rank_spectra(g.values.astype(np.float64))
    if stats is not None:
        stats["spectrum_max"] = float(max(np.abs(fs).max(), np.abs(gs).max()))
    acc = np.empty(fs.shape[1], dtype=np.complex128)
    tmp = np.empty_like(acc)
    for k in range(f.n + 1):
        acc.fill(0)
        for i in range(k + 1):
            np.multiply(fs[i], gs[k - i], out=tmp)
            acc += tmp
        if stats is not None:
            stats["spectrum_max"] = max(stats["spectrum_max"], float(np.abs(acc).max()))
        yield k, fftcore.transform(acc, inverse=True)


def fft_rank_products(f: SetFunction, g: SetFunction) -> np.ndarray:
    """The uncleaned intermediates ``h^(0..n)`` of the FFT engine, complex ``(n+1, 2**n)``.

    Off-rank entries of row k are generally nonzero; only entries of
    cardinality k are meaningful.
    """
    _check_pair(f, g)
    return np.stack([h for _, h in _iter_rank_products(f, g)])


def subset_convolve_fft(f: SetFunction, g: SetFunction, report: RunReport | None = None) -> SetFunction:
    _check_pair(f, g)
    pc = popcounts(f.n)
    out = np.zeros(1 << f.n, dtype=np.float64)
    stats: dict = {}
    max_imag = 0.0
    for k, hk in _iter_rank_products(f, g, stats):
        mask = pc == k
        kept = hk[mask]
        out[mask] = kept.real
        if kept.size:
            max_imag = max(max_imag, float(np.abs(kept.imag).max()))
    if report is not None:
        report.max_imag = max_imag
        report.max_intermediate_magnitude = stats["spectrum_max"]
    return SetFunction(out, "float")


def round_to_integers(h: SetFunction, report: RunReport | None = None) -> SetFunction:
    """Round each entry to the nearest integer, refusing if any is ambiguous.

    Raises :class:`RoundingUnsafeError` when some entry lies more than 0.25
    from its nearest integer.
    """
    if h.kind == "int":
        if report is not None:
            report.rounding_max_deviation = 0.0
        return h
    rounded, deviation = round_checked(h.values)
    if report is not None:
        report.rounding_max_deviation = deviation
    return SetFunction(rounded, "int")


def round_checked(values: np.ndarray) -> tuple[np.ndarray, float]:
    if not np.all(np.isfinite(values)):
        bad = int(np.flatnonzero(~np.isfinite(values.ravel()))[0])
        raise RoundingUnsafeError(float("inf"), bad)
    nearest = np.rint(values)
    dev = np.abs(values - nearest)
    deviation = float(dev.max()) if dev.size else 0.0
    if deviation > ROUNDING_THRESHOLD:
        raise RoundingUnsafeError(deviation, int(np.argmax(dev.ravel())))
    if nearest.size and np.abs(nearest).max() >= 2.0**63:
        raise ValueError("rounded values exceed the int64 range")
    return nearest.astype(np.int64), deviation


ENGINES: dict[str, Callable[..., SetFunction]] = {
    "naive": subset_convolve_naive,
    "zeta": subset_convolve_zeta,
    "fft": subset_convolve_fft,
}


def run(algo: str, f: SetFunction, g: SetFunction) -> tuple[SetFunction, RunReport]:
    """Run the named engine, timing it into a fresh :class:`RunReport`."""
    try:
        engine = ENGINES[algo]
    except KeyError:
        raise ValueError(f"unknown engine {algo!r}; choose from {sorted(ENGINES)}") from None
    report = RunReport(algo=algo, n=f.n)
    start = time.perf_counter_ns()
    h = engine(f, g, report)
    report.wall_time_ns = time.perf_counter_ns() - start
    return h, report
