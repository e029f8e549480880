"""Floating-point error measurement for the zeta and FFT engines.

Inputs are log-uniform in magnitude, ``+-10**e`` with ``e`` uniform in
``[-mag, mag]``, so a trial mixes tiny and huge values.  Errors are taken
against an exact reference rounded once to double:

* ``n <= 14``: every double is a dyadic rational, so scaling by the largest
  denominator gives integers; the naive engine runs on Python ints and the
  sums are divided back with correct rounding.
* larger n: naive evaluation in compensated arithmetic (error-free
  products by Veltkamp splitting, error-free sums, one correction term).
"""

from __future__ import annotations

import time

import numpy as np

from .convolution import ENGINES, RunReport, naive_kernel, submask_steps
from .rng import derive_seed, uniform01
from .setfn import SetFunction

CSV_COLUMNS = (
    "engine",
    "n",
    "trial",
    "seed",
    "max_abs_err",
    "max_rel_err",
    "max_intermediate_magnitude",
    "wall_time_ns",
)
ENGINES_MEASURED = ("zeta", "fft")
EXACT_REFERENCE_MAX_N = 14

_SPLIT = 134217729.0  # 2**27 + 1


def log_uniform_instance(n: int, seed: int, mag: float) -> SetFunction:
    size = 1 << n
    u = uniform01(seed, 2 * size)
    exponent = (2.0 * u[:size] - 1.0) * mag
    sign = np.where(u[size:] < 0.5, -1.0, 1.0)
    return SetFunction(sign * 10.0**exponent, "float")


def _scaled_ints(values: np.ndarray) -> tuple[np.ndarray, int]:
    ratios = [float(v).as_integer_ratio() for v in values]
    denom = max(q for _, q in ratios)
    return np.array([p * (denom // q) for p, q in ratios], dtype=object), denom


def exact_reference(f: SetFunction, g: SetFunction) -> np.ndarray:
    """Correctly rounded ``f * g`` for ``n <= 14``."""
    fi, fd = _scaled_ints(f.values)
    gi, gd = _scaled_ints(g.values)
    h = naive_kernel(fi, gi)
    denom = fd * gd
    return np.array([int(v) / denom for v in h], dtype=np.float64)


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _split(a):
    c = _SPLIT * a
    hi = c - (c - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def compensated_reference(f: SetFunction, g: SetFunction) -> np.ndarray:
    """Naive evaluation with doubled working precision (Dot2-style)."""
    fv = f.values.astype(np.float64)
    gv = g.values.astype(np.float64)
    size = fv.shape[0]
    hi = np.zeros(size)
    lo = np.zeros(size)
    sets = None
    for m, sets, subs in submask_steps(f.n):
        s_m, t_m = sets[:m], subs[:m]
        p, pe = _two_prod(fv[t_m], gv[s_m ^ t_m])
        hi[:m], se = _two_sum(hi[:m], p)
        lo[:m] += pe + se
    out = np.empty(size)
    out[sets] = hi + lo
    return out


def reference(f: SetFunction, g: SetFunction) -> np.ndarray:
    if f.n <= EXACT_REFERENCE_MAX_N:
        return exact_reference(f, g)
    return compensated_reference(f, g)


def error_metrics(approx: np.ndarray, ref: np.ndarray) -> tuple[float, float]:
    """Max absolute error, and max relative error over entries with a nonzero reference."""
    diff = np.abs(approx - ref)
    max_abs = float(diff.max()) if diff.size else 0.0
    nz = ref != 0
    max_rel = float((diff[nz] / np.abs(ref[nz])).max()) if nz.any() else 0.0
    return max_abs, max_rel


def trial_seeds(seed: int, trial: int) -> tuple[int, int, int]:
    base = derive_seed(seed, trial)
    return base, derive_seed(base, 0), derive_seed(base, 1)


def run_precision(n: int, mag: float, trials: int, seed: int) -> list[dict]:
    """One row per (engine, trial), sorted by engine then trial."""
    rows = []
    for trial in range(trials):
        base, fs, gs = trial_seeds(seed, trial)
        f = log_uniform_instance(n, fs, mag)
        g = log_uniform_instance(n, gs, mag)
        ref = reference(f, g)
        for engine in ENGINES_MEASURED:
            report = RunReport(algo=engine, n=n)
            start = time.perf_counter_ns()
            h = ENGINES[engine](f, g, report)
            report.wall_time_ns = time.perf_counter_ns() - start
            report.max_abs_err, report.max_rel_err = error_metrics(h.values, ref)
            rows.append(
                {
                    "engine": engine,
                    "n": n,
                    "trial": trial,
                    "seed": base,
                    "max_abs_err": report.max_abs_err,
                    "max_rel_err": report.max_rel_err,
                    "max_intermediate_magnitude": report.max_intermediate_magnitude,
                    "wall_time_ns": report.wall_time_ns,
                }
            )
    rows.sort(key=lambda r: (r["engine"], r["n"], r["trial"]))
    return rows
