"""Subset convolution in the (+, x) ring: naive, zeta/Moebius and FFT engines."""

from .convolution import (
    ENGINES,
    RoundingUnsafeError,
    RunReport,
    round_to_integers,
    run,
    subset_convolve_fft,
    subset_convolve_naive,
    subset_convolve_zeta,
)
from .disjointsum import IndexedSetFunction, disjoint_set_sum_fft, disjoint_set_sum_naive
from .setfn import RankedFamily, SetFunction, assemble, chop, clean_rank, random_instance
from .transforms import mobius, zeta

__all__ = [
    "ENGINES",
    "IndexedSetFunction",
    "RankedFamily",
    "RoundingUnsafeError",
    "RunReport",
    "SetFunction",
    "assemble",
    "chop",
    "clean_rank",
    "disjoint_set_sum_fft",
    "disjoint_set_sum_naive",
    "mobius",
    "random_instance",
    "round_to_integers",
    "run",
    "subset_convolve_fft",
    "subset_convolve_naive",
    "subset_convolve_zeta",
    "zeta",
]
