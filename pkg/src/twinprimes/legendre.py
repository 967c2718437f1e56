"""Inclusion-exclusion prime counting: phi(y, r) two ways, plus the bounds
it yields on pi(y) and on the prime density pi(y)/y.

phi(y, r) counts naturals <= y (1 included) divisible by none of the first
r primes.  Two independent evaluations are kept permanently as mutual
oracles: the two-argument recurrence and the direct signed Moebius sum over
squarefree products of the first r primes.  All arithmetic is exact integer
arithmetic; floor(y/d) is integer division.

The classical choice r = pi(sqrt(y)) is one selectable instance; r stays a
free parameter here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .sieve import PrimeSieve, small_primes

MAX_MOBIUS_R = 25  # 2**r terms; beyond this the direct sum is refused

_LN2 = math.log(2)


@lru_cache(maxsize=None)
def first_primes(r: int) -> tuple[int, ...]:
    """The first r primes, strictly increasing from 2."""
    if r < 0:
        raise ValueError(f"r must be >= 0, got {r}")
    if r == 0:
        return ()
    bound = 15 if r < 6 else int(r * (math.log(r) + math.log(math.log(r)))) + 10
    while True:
        ps = small_primes(bound)
        if len(ps) >= r:
            return tuple(int(p) for p in ps[:r])
        bound *= 2


@lru_cache(maxsize=None)
def _phi(y: int, r: int) -> int:
    if r == 0 or y < 2:
        return y
    return _phi(y, r - 1) - _phi(y // first_primes(r)[-1], r - 1)


def phi_recursive(y: int, r: int) -> int:
    """phi(y, r) by the recurrence phi(y, r) = phi(y, r-1) - phi(y//P_r, r-1)."""
    if y < 0:
        raise ValueError(f"y must be >= 0, got {y}")
    if r < 0:
        raise ValueError(f"r must be >= 0, got {r}")
    first_primes(r)  # materialize before recursing
    return _phi(y, r)


def phi_mobius(y: int, r: int) -> int:
    """phi(y, r) as the signed sum of floor(y/d) over squarefree divisors d
    of the product of the first r primes.

    Divisors exceeding y are pruned during generation (their floor terms are
    zero), so the cost is the number of surviving divisors, not 2**r; r is
    still capped because the unpruned term count doubles per prime.
    """
    if y < 0:
        raise ValueError(f"y must be >= 0, got {y}")
    if r < 0:
        raise ValueError(f"r must be >= 0, got {r}")
    if r > MAX_MOBIUS_R:
        raise ValueError(
            f"r={r} would expand into 2**{r} Moebius terms; "
            f"the direct sum is capped at r={MAX_MOBIUS_R}"
        )
    divisors = [(1, 1)]
    for p in first_primes(r):
        divisors.extend(
            [(d * p, -s) for d, s in divisors if d * p <= y]
        )
    return sum(s * (y // d) for d, s in divisors)


@dataclass(frozen=True)
class PhiPrimeBound:
    """Result of checking pi(y) <= phi(y, r) + r."""

    y: int
    r: int
    pi_y: int
    phi: int
    bound_ok: bool


def check_phi_pi_bound(sieve: PrimeSieve, y: int, r: int) -> PhiPrimeBound:
    """Evaluate pi(y) <= phi(y, r) + r exactly (expected to always hold)."""
    pi_y = sieve.count_primes_upto(y) if y >= 2 else 0
    phi = phi_recursive(y, r)
    return PhiPrimeBound(y, r, pi_y, phi, pi_y <= phi + r)


@dataclass(frozen=True)
class DensityBoundParams:
    """Parameters for the explicit prime-density upper bound with r = c*ln(y).

    Requires c*ln(2) < 1 (so 2**r < y) and ln(c) + ln(ln(y)) > 0 (positive
    denominator); violations are rejected up front.
    """

    c: float
    y: int

    def __post_init__(self):
        if self.c <= 0:
            raise ValueError(f"c must be positive, got c={self.c}")
        if self.c * _LN2 >= 1:
            raise ValueError(
                f"c*ln(2) = {self.c * _LN2:.6f} must be < 1 (c < {1 / _LN2:.6f})"
            )
        if self.y < 2:
            raise ValueError(f"y must be >= 2, got y={self.y}")
        if math.log(self.c) + math.log(math.log(self.y)) <= 0:
            raise ValueError(
                "ln(c) + ln(ln(y)) = "
                f"{math.log(self.c) + math.log(math.log(self.y)):.6f} "
                "must be > 0"
            )


@dataclass(frozen=True)
class DensityBoundCheck:
    r: float  # c * ln(y)
    bound: float
    actual: float  # pi(y) / y
    holds: bool


def density_upper_bound(
    sieve: PrimeSieve, params: DensityBoundParams
) -> DensityBoundCheck:
    """Check pi(y)/y < 1/(ln(c) + ln(ln(y))) + 2*y**(c*ln(2) - 1)."""
    c, y = params.c, params.y
    bound = 1.0 / (math.log(c) + math.log(math.log(y))) + 2.0 * y ** (c * _LN2 - 1.0)
    actual = sieve.count_primes_upto(y) / y
    return DensityBoundCheck(c * math.log(y), bound, actual, actual < bound)
