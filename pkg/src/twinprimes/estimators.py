"""Closed-form bounds and estimators for prime and twin-prime counts.

Covers the elementary two-sided Trost bounds on pi(x), the A/B sandwich
around the composed count pi(pi(x)) obtained by feeding those bounds into
themselves, truncated Euler products for the twin prime constant, the
density ratio h = x*pi2(x)/pi(x)**2 with its 5.12 cap, and the calibrated
empirical twin-count estimator round(h_c * pi(x)**2 / x).

Note on the product estimator: the trailing product of (p-1)/(p-2) over odd
primes diverges, so it is only ever evaluated under an explicit truncation
bound and callers are expected to surface that caveat (the CLI prints a
warning).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from statistics import fmean
from typing import Iterable, Sequence

import numpy as np

from .sieve import PrimeSieve, small_primes

LN2 = math.log(2)
LN_1_5 = math.log(1.5)
LN_1_6 = math.log(1.6)

# Empirical cap on the density ratio h, derived from the upper sandwich
# bound together with pi(x) > x/ln(x).
H_RATIO_CAP = 5.12

DEFAULT_H_C = 1.325067


@dataclass(frozen=True)
class EstimatorConfig:
    """Knobs shared by the estimator family.

    h_c          calibrated mean density ratio (overridable via `calibrate`)
    euler_pmax   truncation bound for all Euler products
    c_density    constant c for the prime-density upper bound, c*ln(2) < 1
    """

    h_c: float = DEFAULT_H_C
    euler_pmax: int = 10**6
    c_density: float = 1.0

    def __post_init__(self):
        if not self.h_c > 0:
            raise ValueError(f"h_c must be positive, got {self.h_c}")
        if self.euler_pmax < 100:
            raise ValueError(f"euler_pmax must be >= 100, got {self.euler_pmax}")
        if not 0 < self.c_density < 1 / LN2:
            raise ValueError(
                f"c_density must lie in (0, {1 / LN2:.6f}), got {self.c_density}"
            )


@dataclass(frozen=True)
class BoundsRow:
    """One row of the bounds table: a_bound < pi2_x < b_bound expected."""

    x: int
    a_bound: float
    pi2_x: int
    b_bound: float


@dataclass(frozen=True)
class SandwichCheck:
    """Sandwich evaluation at x: bounds, both counts, and verdicts."""

    x: int
    a_bound: float
    b_bound: float
    pi2_x: int
    pi_pi_x: int
    holds: bool       # a_bound < pi_pi_x < b_bound
    holds_pi2: bool   # a_bound < pi2_x  < b_bound

    @property
    def row(self) -> BoundsRow:
        return BoundsRow(self.x, self.a_bound, self.pi2_x, self.b_bound)


@dataclass(frozen=True)
class EstimateRow:
    """One row of the estimator table, densities included."""

    x: int
    eta_p: float       # pi(x) / x
    eta_pp: float      # pi2(x) / pi(x)
    h: float           # x * pi2(x) / pi(x)**2
    pi2_x: int
    pi2_star: int
    abs_delta: int
    rel_error: float


def round_half_away(v: float) -> int:
    """Nearest integer, ties away from zero (deterministic across platforms)."""
    if v >= 0:
        return math.floor(v + 0.5)
    return math.ceil(v - 0.5)


def log_grid(lo: int = 5, hi: int = 10**6, n: int = 200) -> np.ndarray:
    """n log-spaced integer sample points covering [lo, hi]."""
    return np.round(np.geomspace(lo, hi, n)).astype(np.int64)


def trost_bounds(x: int) -> tuple[float, float]:
    """The elementary bounds 2x/(3 ln x) < pi(x) < 8x/(5 ln x), for x >= 5."""
    if x < 5:
        raise ValueError(f"x must be >= 5, got {x}")
    lx = math.log(x)
    return 2 * x / (3 * lx), 8 * x / (5 * lx)


def sandwich_bounds(x: int) -> tuple[float, float]:
    """Bounds A < pi(pi(x)) < B from composing the Trost bounds with x/ln x.

    A = 4x / (9 ln x [ln x - ln(ln x) - ln 1.5])
    B = 64x / (25 ln x [ln x - ln(ln x) + ln 1.6])
    """
    if x < 5:
        raise ValueError(f"x must be >= 5, got {x}")
    lx = math.log(x)
    llx = math.log(lx)
    denom_a = lx - llx - LN_1_5
    if denom_a <= 0:
        raise ValueError(
            f"ln(x) - ln(ln(x)) - ln(1.5) = {denom_a:.6f} must be > 0 at x={x}"
        )
    a = 4 * x / (9 * lx * denom_a)
    b = 64 * x / (25 * lx * (lx - llx + LN_1_6))
    return a, b


def sandwich_check(sieve: PrimeSieve, x: int) -> SandwichCheck:
    """Evaluate the sandwich at x against both pi(pi(x)) and pi2(x)."""
    a, b = sandwich_bounds(x)
    pi_x = sieve.count_primes_upto(x)
    pi_pi_x = sieve.count_primes_upto(pi_x)
    pi2_x = sieve.count_twins_upto(x)
    return SandwichCheck(
        x, a, b, pi2_x, pi_pi_x, a < pi_pi_x < b, a < pi2_x < b
    )


@lru_cache(maxsize=16)
def twin_prime_constant(pmax: int) -> float:
    """2 * prod_{3 <= p <= pmax} (1 - 1/(p-1)**2), decreasing in pmax."""
    if pmax < 3:
        raise ValueError(f"pmax must be >= 3, got {pmax}")
    p = small_primes(pmax)[1:].astype(np.float64)
    return 2.0 * float(np.prod(1.0 - 1.0 / (p - 1.0) ** 2))


@lru_cache(maxsize=16)
def twin_ratio_product(pmax: int) -> float:
    """prod_{3 <= p <= pmax} (p-1)/(p-2); diverges as pmax grows."""
    if pmax < 3:
        raise ValueError(f"pmax must be >= 3, got {pmax}")
    p = small_primes(pmax)[1:].astype(np.float64)
    return float(np.prod((p - 1.0) / (p - 2.0)))


def hardy_littlewood_simple(x: int, cfg: EstimatorConfig = EstimatorConfig()) -> float:
    """Twin-count estimate C2 * x / ln(x) with C2 truncated at cfg.euler_pmax.

    Evaluated exactly as written; it overshoots actual twin counts by a
    growing factor, which the audit records as a finding.
    """
    if x < 5:
        raise ValueError(f"x must be >= 5, got {x}")
    return twin_prime_constant(cfg.euler_pmax) * x / math.log(x)


def hardy_littlewood_product(x: int, cfg: EstimatorConfig = EstimatorConfig()) -> float:
    """Twin-count estimate C2 * x/ln(x)**2 * prod (p-1)/(p-2), truncated.

    The trailing product has no finite limit, so the value is meaningful
    only relative to the explicit truncation cfg.euler_pmax.
    """
    if x < 5:
        raise ValueError(f"x must be >= 5, got {x}")
    c = twin_prime_constant(cfg.euler_pmax)
    return c * x / math.log(x) ** 2 * twin_ratio_product(cfg.euler_pmax)


def density_ratio(x: int, pi_x: int, pi2_x: int) -> float:
    """h = (pi2/pi) / (pi/x) = x * pi2(x) / pi(x)**2."""
    if pi_x <= 0:
        raise ValueError(f"pi_x must be positive, got {pi_x}")
    return x * pi2_x / pi_x**2


def check_density_ratio_bound(sieve: PrimeSieve, x: int) -> bool:
    """True iff 0 < h < 5.12 at x (x >= 17, where pi(x) > x/ln(x) is known).

    The pi(x) > x/ln(x) hypothesis behind the cap is verified against the
    sieve rather than assumed.
    """
    if x < 17:
        raise ValueError(f"x must be >= 17, got {x}")
    pi_x = sieve.count_primes_upto(x)
    if pi_x * math.log(x) <= x:
        raise ArithmeticError(
            f"pi({x}) = {pi_x} does not exceed x/ln(x); cap derivation invalid"
        )
    h = density_ratio(x, pi_x, sieve.count_twins_upto(x))
    return 0 < h < H_RATIO_CAP


def mean_density_ratio(rows: Iterable[EstimateRow]) -> float:
    """Arithmetic mean of the h column; the calibration value for h_c."""
    hs = [row.h for row in rows]
    if not hs:
        raise ValueError("cannot calibrate from an empty row set")
    return fmean(hs)


def twin_count_estimate(
    x: int, pi_x: int, cfg: EstimatorConfig = EstimatorConfig()
) -> int:
    """round(h_c * pi(x)**2 / x), ties rounding half away from zero."""
    if x < 5:
        raise ValueError(f"x must be >= 5, got {x}")
    if pi_x <= 0:
        raise ValueError(f"pi_x must be positive, got {pi_x}")
    return round_half_away(cfg.h_c * pi_x * pi_x / x)


def bounds_rows(sieve: PrimeSieve, xs: Sequence[int]) -> list[BoundsRow]:
    """Bounds-table rows at the given checkpoints."""
    return [sandwich_check(sieve, x).row for x in xs]


def estimate_rows(
    sieve: PrimeSieve, xs: Sequence[int], cfg: EstimatorConfig = EstimatorConfig()
) -> list[EstimateRow]:
    """Estimator-table rows (densities, h, estimate, and its error) at xs."""
    rows = []
    for x in xs:
        pi_x = sieve.count_primes_upto(x)
        pi2_x = sieve.count_twins_upto(x)
        star = twin_count_estimate(x, pi_x, cfg)
        delta = abs(pi2_x - star)
        rows.append(
            EstimateRow(
                x=x,
                eta_p=pi_x / x,
                eta_pp=pi2_x / pi_x,
                h=density_ratio(x, pi_x, pi2_x),
                pi2_x=pi2_x,
                pi2_star=star,
                abs_delta=delta,
                rel_error=delta / pi2_x if pi2_x else math.nan,
            )
        )
    return rows
