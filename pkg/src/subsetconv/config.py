"""Runtime limits."""

import os

DEFAULT_MAX_N = 22
MAX_N_ENV = "SUBSETCONV_MAX_N"


def max_n() -> int:
    """Largest ground-set size accepted, from ``$SUBSETCONV_MAX_N`` or 22."""
    raw = os.environ.get(MAX_N_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_MAX_N
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{MAX_N_ENV}={raw!r} is not an integer") from None
    if value < 0:
        raise ValueError(f"{MAX_N_ENV} must be non-negative, got {value}")
    return value


def check_n(n: int) -> None:
    limit = max_n()
    if not 0 <= n <= limit:
        raise ValueError(f"ground-set size n={n} outside 0..{limit} (set {MAX_N_ENV} to change)")
