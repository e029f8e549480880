import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from subsetconv.convolution import (
    ENGINES,
    RoundingUnsafeError,
    RunReport,
    fft_rank_products,
    round_to_integers,
    run,
    subset_convolve_fft,
    subset_convolve_naive,
    subset_convolve_zeta,
)
from subsetconv.selftest import cyclic_matches_linear, wraparound_counterexamples
from subsetconv.setfn import SetFunction, popcounts, random_instance

F = SetFunction([1, 2, 3, 4])
G = SetFunction([5, 6, 7, 8])
EXACT = {"naive": subset_convolve_naive, "zeta": subset_convolve_zeta}


def fft_exact(f, g):
    return round_to_integers(subset_convolve_fft(f, g))


ALL_EXACT = {**EXACT, "fft": fft_exact}


@pytest.mark.parametrize("engine", list(EXACT))
def test_hand_instance_exact(engine):
    assert EXACT[engine](F, G).values.tolist() == [5, 16, 22, 60]


def test_hand_instance_fft():
    h = subset_convolve_fft(F, G)
    assert h.kind == "float"
    assert np.max(np.abs(h.values - [5, 16, 22, 60])) <= 1e-9


def test_frozen_n3_instance():
    # expected values from oracles.subset_convolution
    f = SetFunction(list(range(1, 9)))
    g = SetFunction(list(range(8, 0, -1)))
    expected = [8, 23, 30, 70, 44, 94, 100, 204]
    for engine in ALL_EXACT.values():
        assert engine(f, g).values.tolist() == expected


def test_single_point_lattice():
    f, g = SetFunction([3.25]), SetFunction([-2.0])
    assert abs(subset_convolve_fft(f, g).values[0] + 6.5) <= 1e-12
    assert subset_convolve_naive(SetFunction([3]), SetFunction([-2])).values.tolist() == [-6]


@pytest.mark.parametrize("engine", list(ALL_EXACT))
def test_unit_and_zero(engine):
    f = random_instance(5, 11)
    assert ALL_EXACT[engine](f, SetFunction.unit(5)) == f
    assert ALL_EXACT[engine](SetFunction.zeros(5), f) == SetFunction.zeros(5)


def test_fft_unit_float():
    f = random_instance(8, 2, 1.0, "float")
    h = subset_convolve_fft(f, SetFunction.unit(8, "float"))
    assert np.max(np.abs(h.values - f.values)) <= 1e-9


@pytest.mark.parametrize("n", range(9))
def test_engines_match_definition(n):
    f = random_instance(n, 100 + n)
    g = random_instance(n, 200 + n)
    ref = oracles.subset_convolution(f.values.tolist(), g.values.tolist())
    for engine in ALL_EXACT.values():
        assert engine(f, g).values.tolist() == ref


def test_float_engines_agree():
    f = random_instance(10, 1, 1.0, "float")
    g = random_instance(10, 2, 1.0, "float")
    ref = subset_convolve_naive(f, g).values
    assert np.max(np.abs(subset_convolve_zeta(f, g).values - ref)) < 1e-9
    assert np.max(np.abs(subset_convolve_fft(f, g).values - ref)) < 1e-9


def test_oracle_equivalence_all_n():
    for n in range(13):
        for seed in range(6):
            f = random_instance(n, 1000 + seed)
            g = random_instance(n, 2000 + seed)
            ref = subset_convolve_naive(f, g)
            assert subset_convolve_zeta(f, g) == ref
            report = RunReport("fft", n)
            assert round_to_integers(subset_convolve_fft(f, g), report) == ref
            assert report.rounding_max_deviation < 1e-4


def int_pairs(max_n=5, bound=100):
    return st.integers(0, max_n).flatmap(
        lambda n: st.tuples(
            *[st.lists(st.integers(-bound, bound), min_size=1 << n, max_size=1 << n).map(SetFunction)] * 3
        )
    )


@settings(max_examples=60, deadline=None)
@given(int_pairs(), st.integers(-20, 20))
def test_ring_axioms(fgh, alpha):
    f, g, h = fgh
    for conv in ALL_EXACT.values():
        assert conv(f, g) == conv(g, f)
        assert conv(SetFunction(alpha * f.values), g) == SetFunction(alpha * conv(f, g).values)
        assert conv(conv(f, g), h) == conv(f, conv(g, h))


@pytest.mark.parametrize("n", [3, 5])
def test_rank_support(n):
    pc = popcounts(n)
    base = random_instance(n, 7, 9)
    for i in range(n + 1):
        for j in range(n + 1):
            f = SetFunction(np.where(pc == i, base.values, 0))
            g = SetFunction(np.where(pc == j, base.values[::-1], 0))
            h = subset_convolve_naive(f, g).values
            assert np.all(h[pc != i + j] == 0)
            if i + j > n:
                assert np.all(h == 0)


def test_intermediates_leak_off_rank_but_result_is_right():
    n = 6
    f = random_instance(n, 3, 9)
    g = random_instance(n, 4, 9)
    raw = fft_rank_products(f, g)
    pc = popcounts(n)
    off = [np.max(np.abs(raw[k][pc != k])) for k in range(1, n)]
    assert max(off) > 1.0
    assert fft_exact(f, g) == subset_convolve_naive(f, g)


def test_no_wraparound_small_cases():
    for n in range(9):
        bad, checked = wraparound_counterexamples(n)
        assert bad == 0
        assert checked == (1 << n) * ((1 << n) - 1) // 2


@pytest.mark.parametrize("n", range(9))
def test_cyclic_rank_convolution_equals_linear(n):
    assert cyclic_matches_linear(random_instance(n, 5 + n, 20), random_instance(n, 50 + n, 20))


def test_size_mismatch():
    for engine in ENGINES.values():
        with pytest.raises(ValueError, match="mismatch"):
            engine(SetFunction([1, 2]), SetFunction([1, 2, 3, 4]))


def test_overflow_precondition():
    big = SetFunction(np.full(4, 2**31, dtype=np.int64))
    with pytest.raises(ValueError, match="overflow"):
        subset_convolve_naive(big, big)
    mid = SetFunction(np.full(1 << 10, 2**20, dtype=np.int64))
    subset_convolve_naive(mid, mid)
    with pytest.raises(ValueError, match="overflow"):
        subset_convolve_zeta(mid, mid)


def test_round_to_integers():
    report = RunReport("fft", 1)
    out = round_to_integers(SetFunction([4.9999999, 16.0000001]), report)
    assert out.kind == "int" and out.values.tolist() == [5, 16]
    assert report.rounding_max_deviation == pytest.approx(1e-7, rel=1e-3)
    report = RunReport("fft", 1)
    assert round_to_integers(SetFunction([3.0, -2.0]), report).values.tolist() == [3, -2]
    assert report.rounding_max_deviation == 0
    with pytest.raises(RoundingUnsafeError):
        round_to_integers(SetFunction([4.6, 1.0]))
    with pytest.raises(RoundingUnsafeError):
        round_to_integers(SetFunction([np.nan, 1.0]))


def test_run_report():
    h, report = run("fft", F, G)
    assert report.algo == "fft" and report.n == 2 and report.wall_time_ns > 0
    assert report.max_imag is not None and report.max_imag < 1e-12
    assert report.max_intermediate_magnitude > 0
    assert "algo=fft" in report.format_line()
    with pytest.raises(ValueError):
        run("karatsuba", F, G)
    with pytest.raises(ValueError):
        RunReport("x", 1, wall_time_ns=-1)
    with pytest.raises(ValueError):
        RunReport("x", 1, max_abs_err=-1.0)


def test_zeta_reports_intermediate_growth():
    f = random_instance(8, 1, 1.0, "float")
    g = random_instance(8, 2, 1.0, "float")
    report = RunReport("zeta", 8)
    subset_convolve_zeta(f, g, report)
    assert report.max_intermediate_magnitude >= max(np.abs(f.values).max(), np.abs(g.values).max())


def test_fft_reproducible():
    f = random_instance(9, 1, 1.0, "float")
    g = random_instance(9, 2, 1.0, "float")
    assert np.array_equal(subset_convolve_fft(f, g).values, subset_convolve_fft(f, g).values)
