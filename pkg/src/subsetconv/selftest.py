"""Fixed-seed property suites run by ``subsetconv selftest``.

Each suite returns ``(passed, total)`` counts of individual checks.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from . import fftcore
from .convolution import (
    round_to_integers,
    subset_convolve_fft,
    subset_convolve_naive,
    subset_convolve_zeta,
)
from .disjointsum import (
    disjoint_set_sum_fft,
    disjoint_set_sum_naive,
    random_indexed,
    round_indexed,
    value_field_width,
)
from .rng import splitmix64, uniform01
from .setfn import SetFunction, assemble, chop, chop_array, clean_rank, popcounts, random_instance
from .transforms import mobius, zeta

SPLITMIX64_REFERENCE = {
    0: (0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F),
    1234567: (6457827717110365317, 3203168211198807973, 9817491932198370423),
}


def wraparound_counterexamples(n: int) -> tuple[int, int]:
    """Count pairs ``a, b < 2**n`` whose sum wraps yet lands on rank ``|a| + |b|``.

    Returns ``(counterexamples, wrapping_pairs_checked)``.
    """
    size = 1 << n
    pc = popcounts(n).astype(np.int64)
    b = np.arange(size, dtype=np.int64)
    bad = checked = 0
    rows = max(1, (1 << 20) // size)
    for start in range(0, size, rows):
        a = np.arange(start, min(size, start + rows), dtype=np.int64)[:, None]
        total = a + b
        wraps = total >= size
        k = pc[a] + pc[b]
        hit = pc[total & (size - 1)] == k
        checked += int(wraps.sum())
        bad += int((wraps & hit).sum())
    return bad, checked


def _splitmix_reference():
    ok = sum(tuple(int(v) for v in splitmix64(s, 3)) == ref for s, ref in SPLITMIX64_REFERENCE.items())
    return ok, len(SPLITMIX64_REFERENCE)


def _chop_roundtrip():
    ok = total = 0
    for n in range(13):
        for kind, bound in (("int", 50), ("float", 1.0)):
            f = random_instance(n, 100 + n, bound, kind)
            fam = chop(f)
            pc = popcounts(n)
            support = all(np.all(r.values[pc != i] == 0) for i, r in enumerate(fam))
            ok += support and assemble(fam) == f
            total += 1
    return ok, total


def _clean_rank_decomposition():
    ok = total = 0
    for n in range(11):
        h = random_instance(n, 200 + n)
        parts = [clean_rank(h, k) for k in range(n + 1)]
        idem = all(clean_rank(p, k) == p for k, p in enumerate(parts))
        ok += idem and assemble(parts) == h
        total += 1
    return ok, total


def _zeta_bruteforce():
    ok = total = 0
    for n in range(9):
        f = random_instance(n, 300 + n)
        v = f.values.tolist()
        ref = [sum(v[t] for t in range(1 << n) if t & s == t) for s in range(1 << n)]
        ok += zeta(f).values.tolist() == ref
        total += 1
    return ok, total


def _zeta_mobius_inverse():
    ok = total = 0
    for n in range(15):
        for trial in range(10):
            f = random_instance(n, 1000 * n + trial)
            ok += mobius(zeta(f)) == f and zeta(mobius(f)) == f
            total += 1
    return ok, total


def _unit_complex(seed: int, size: int) -> np.ndarray:
    u = uniform01(seed, 2 * size)
    return (2 * u[:size] - 1) + 1j * (2 * u[size:] - 1)


def _fft_naive_dft():
    ok = total = 0
    for bits in range(9):
        size = 1 << bits
        x = _unit_complex(bits, size)
        t = np.arange(size)
        dft = np.exp(-2j * np.pi * np.outer(t, t) / size) @ x
        ok += np.max(np.abs(fftcore.fft(x).values - dft)) <= 1e-10
        total += 1
    return ok, total


def _fft_roundtrip():
    ok = total = 0
    for bits in range(17):
        x = _unit_complex(50 + bits, 1 << bits)
        back = fftcore.fft(fftcore.fft(x), "inverse").values
        ok += np.max(np.abs(back - x)) <= 1e-12
        total += 1
    return ok, total


def _fft_parseval():
    ok = total = 0
    for bits in range(17):
        x = _unit_complex(80 + bits, 1 << bits)
        lhs = np.sum(np.abs(x) ** 2)
        rhs = np.sum(np.abs(fftcore.fft(x).values) ** 2) / x.size
        ok += abs(lhs - rhs) <= 1e-12 * lhs
        total += 1
    return ok, total


def _convolution_theorem():
    ok = total = 0
    for bits in range(11):
        size = 1 << bits
        x = _unit_complex(120 + bits, size).real
        y = _unit_complex(140 + bits, size).real
        direct = None
        if bits <= 7:
            direct = np.array([sum(x[a] * y[(s - a) % size] for a in range(size)) for s in range(size)])
        cyc = fftcore.sequence_convolve(x, y, "cyclic")
        spec = fftcore.transform(fftcore.transform(x) * fftcore.transform(y), inverse=True).real
        good = np.max(np.abs(cyc - spec)) <= 1e-9
        if direct is not None:
            good = good and np.max(np.abs(cyc - direct)) <= 1e-9
        ok += bool(good)
        total += 1
    return ok, total


def _oracle_zeta():
    ok = total = 0
    for n in range(13):
        for trial in range(5):
            f = random_instance(n, 5000 + 100 * n + trial)
            g = random_instance(n, 7000 + 100 * n + trial)
            ok += subset_convolve_zeta(f, g) == subset_convolve_naive(f, g)
            total += 1
    return ok, total


def _oracle_fft():
    ok = total = 0
    for n in range(13):
        for trial in range(5):
            f = random_instance(n, 9000 + 100 * n + trial)
            g = random_instance(n, 11000 + 100 * n + trial)
            ok += round_to_integers(subset_convolve_fft(f, g)) == subset_convolve_naive(f, g)
            total += 1
    return ok, total


def _no_wraparound():
    ok = 0
    for n in range(13):
        bad, _ = wraparound_counterexamples(n)
        ok += bad == 0
    return ok, 13


def cyclic_matches_linear(f: SetFunction, g: SetFunction) -> bool:
    """Cyclic rank convolution plus cleanup equals the zero-padded linear one."""
    n = f.n
    size = 1 << n
    pc = popcounts(n)
    fr = chop_array(f.values)
    gr = chop_array(g.values)
    for k in range(n + 1):
        cyc = np.zeros(size)
        lin = np.zeros(2 * size - 1, dtype=np.int64)
        for i in range(k + 1):
            cyc += fftcore.sequence_convolve(fr[i].astype(float), gr[k - i].astype(float), "cyclic")
            lin += np.convolve(fr[i], gr[k - i])
        mask = pc == k
        if not np.array_equal(np.rint(cyc[mask]).astype(np.int64), lin[:size][mask]):
            return False
    return True


def _cyclic_vs_linear():
    ok = total = 0
    for n in range(9):
        for trial in range(3):
            f = random_instance(n, 13000 + 10 * n + trial, 20)
            g = random_instance(n, 14000 + 10 * n + trial, 20)
            ok += cyclic_matches_linear(f, g)
            total += 1
    return ok, total


def _ring_axioms():
    ok = total = 0
    engines = (
        subset_convolve_naive,
        subset_convolve_zeta,
        lambda a, b: round_to_integers(subset_convolve_fft(a, b)),
    )
    for n in range(7):
        f = random_instance(n, 15000 + n, 10)
        g = random_instance(n, 16000 + n, 10)
        h = random_instance(n, 17000 + n, 10)
        e = SetFunction.unit(n)
        ref = subset_convolve_naive
        for conv in engines:
            checks = (
                conv(f, g) == conv(g, f),
                conv(f, e) == f,
                conv(SetFunction(3 * f.values), g) == SetFunction(3 * ref(f, g).values),
                conv(conv(f, g), h) == conv(f, conv(g, h)) == ref(ref(f, g), h),
            )
            ok += sum(checks)
            total += len(checks)
    return ok, total


def _rank_support():
    ok = total = 0
    for n in range(1, 8):
        pc = popcounts(n)
        for i in range(n + 1):
            for j in range(n + 1):
                f = SetFunction(np.where(pc == i, 1 + np.arange(1 << n) % 5, 0))
                g = SetFunction(np.where(pc == j, 2 + np.arange(1 << n) % 3, 0))
                h = subset_convolve_naive(f, g).values
                ok += bool(np.all(h[pc != i + j] == 0)) and (i + j > n or bool(np.any(h != 0)))
                total += 1
    return ok, total


def _disjoint_set_sum():
    ok = total = 0
    for n in range(7):
        for m in range(9):
            for trial in range(2):
                f = random_indexed(n, m, 20000 + 100 * n + 10 * m + trial)
                g = random_indexed(n, m, 30000 + 100 * n + 10 * m + trial)
                rounded, _ = round_indexed(disjoint_set_sum_fft(f, g))
                ok += rounded == disjoint_set_sum_naive(f, g)
                total += 1
    return ok, total


def field_separation_violations(n: int, m: int) -> int:
    """Encoded index pairs whose value fields carry into the subset field."""
    width = value_field_width(m)
    bad = 0
    for s1 in range(1 << n):
        for s2 in range(1 << n):
            for v1 in range(m + 1):
                for v2 in range(m + 1):
                    total = (s1 * width + v1) + (s2 * width + v2)
                    if total // width != s1 + s2 or total % width != v1 + v2:
                        bad += 1
    return bad


def _field_separation():
    ok = total = 0
    for n in range(5):
        for m in range(5):
            ok += field_separation_violations(n, m) == 0
            total += 1
    return ok, total


SUITES: list[tuple[str, Callable[[], tuple[int, int]]]] = [
    ("splitmix64_reference_vectors", _splitmix_reference),
    ("chop_assemble_roundtrip", _chop_roundtrip),
    ("clean_rank_decomposition", _clean_rank_decomposition),
    ("zeta_bruteforce", _zeta_bruteforce),
    ("zeta_mobius_inverse", _zeta_mobius_inverse),
    ("fft_naive_dft", _fft_naive_dft),
    ("fft_roundtrip", _fft_roundtrip),
    ("fft_parseval", _fft_parseval),
    ("convolution_theorem", _convolution_theorem),
    ("oracle_zeta_vs_naive", _oracle_zeta),
    ("oracle_fft_vs_naive", _oracle_fft),
    ("no_wraparound_exhaustive_n12", _no_wraparound),
    ("cyclic_vs_linear_rank_convolution", _cyclic_vs_linear),
    ("ring_axioms", _ring_axioms),
    ("rank_support", _rank_support),
    ("disjoint_set_sum_equivalence", _disjoint_set_sum),
    ("field_separation", _field_separation),
]


def run_all(echo: Callable[[str], None] = print) -> bool:
    all_ok = True
    for name, suite in SUITES:
        passed, total = suite()
        status = "PASS" if passed == total else "FAIL"
        all_ok &= passed == total
        echo(f"{name}: {passed}/{total} {status}")
    return all_ok
