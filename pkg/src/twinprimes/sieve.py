"""Segmented, odd-only sieve of Eratosthenes with O(1) prefix counting.

The sieve stores one bit per odd number in [3, limit] (2 is special-cased)
plus per-byte cumulative popcounts, so prime and twin-pair counts up to any
x <= limit are answered in constant time after construction.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

# Odd candidates per segment.  Benchmarked 2**18..2**23 at limit 3.7e7:
# 2**20 (1 MiB unpacked window, 128 KiB packed) came out fastest, with
# 2**19..2**21 within ~7% of each other.
DEFAULT_SEGMENT_SIZE = 1 << 20

# Construction refuses to allocate more than this unless overridden.
DEFAULT_MEMORY_BUDGET = 512 * 1024 * 1024

_POPCOUNT = np.unpackbits(np.arange(256, dtype=np.uint8)[:, None], axis=1).sum(
    axis=1, dtype=np.int64
)


class SieveRangeError(ValueError):
    """A query fell outside the sieved range; never silently answered."""


class MemoryBudgetError(MemoryError):
    """Requested limit needs more memory than the configured budget."""

    def __init__(self, required_bytes: int, budget_bytes: int):
        self.required_bytes = required_bytes
        self.budget_bytes = budget_bytes
        super().__init__(
            f"sieve needs ~{required_bytes:,} bytes "
            f"but the budget is {budget_bytes:,} bytes"
        )


def small_primes(limit: int) -> np.ndarray:
    """All primes <= limit via a plain unsegmented boolean sieve.

    Bootstrap helper for the segmented sieve and for Euler products; fine up
    to a few 10**7, do not use for the main store.
    """
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


def _prefix_count(packed: np.ndarray, cum: np.ndarray, k: int) -> int:
    """Number of set bits among bit indices [0, k) of a little-endian store."""
    if k <= 0:
        return 0
    full, rem = divmod(k, 8)
    count = int(cum[full])
    if rem:
        count += int(_POPCOUNT[packed[full] & ((1 << rem) - 1)])
    return count


class PrimeSieve:
    """Immutable primality store over [2, limit].

    Odd numbers in [3, limit] map to bit i <-> n = 2*i + 3; a second bit
    array marks twin-pair lower members (bit i set iff 2*i+3 and 2*i+5 are
    both prime).  Construction may fan segments out over threads; the result
    is bit-identical to the sequential build, and instances are safe for
    concurrent reads afterwards.
    """

    __slots__ = (
        "limit",
        "segment_size",
        "_n_odd",
        "_bits",
        "_twin_bits",
        "_prime_cum",
        "_twin_cum",
    )

    def __init__(self, limit, segment_size, bits, twin_bits, prime_cum, twin_cum):
        self.limit = limit
        self.segment_size = segment_size
        self._n_odd = (limit - 1) // 2
        self._bits = bits
        self._twin_bits = twin_bits
        self._prime_cum = prime_cum
        self._twin_cum = twin_cum

    def _check_range(self, n: int, what: str = "n") -> None:
        if not 2 <= n <= self.limit:
            raise SieveRangeError(
                f"{what}={n} outside sieved range [2, {self.limit}]"
            )

    def is_prime(self, n: int) -> bool:
        """Exact primality for 2 <= n <= limit; out of range raises."""
        self._check_range(n)
        if n == 2:
            return True
        if n % 2 == 0:
            return False
        i = (n - 3) // 2
        return bool((self._bits[i >> 3] >> (i & 7)) & 1)

    def primes_between(self, lo: int, hi: int) -> np.ndarray:
        """Strictly increasing array of all primes in [lo, hi]."""
        self._check_range(lo, "lo")
        self._check_range(hi, "hi")
        if lo > hi:
            raise SieveRangeError(f"empty range bounds lo={lo} > hi={hi}")
        parts = []
        if lo <= 2:
            parts.append(np.array([2], dtype=np.int64))
        a = max(lo, 3)
        if a % 2 == 0:
            a += 1
        b = hi if hi % 2 else hi - 1
        if a <= b:
            ia, ib = (a - 3) // 2, (b - 3) // 2
            lo_byte, hi_byte = ia >> 3, (ib >> 3) + 1
            flags = np.unpackbits(self._bits[lo_byte:hi_byte], bitorder="little")
            window = flags[ia - 8 * lo_byte : ib - 8 * lo_byte + 1]
            idx = np.flatnonzero(window).astype(np.int64) + ia
            parts.append(2 * idx + 3)
        if not parts:
            return np.empty(0, dtype=np.int64)
        return np.concatenate(parts)

    def count_primes_upto(self, x: int) -> int:
        """pi(x), exact, for 2 <= x <= limit."""
        self._check_range(x, "x")
        return 1 + _prefix_count(self._bits, self._prime_cum, (x - 1) // 2)

    def count_twins_upto(self, x: int) -> int:
        """Twin pairs (p, p+2) with p + 2 <= x, for 2 <= x <= limit."""
        self._check_range(x, "x")
        if x < 5:
            return 0
        return _prefix_count(self._twin_bits, self._twin_cum, (x - 5) // 2 + 1)


def _estimate_bytes(limit: int, segment_size: int, threads: int) -> int:
    n_odd = (limit - 1) // 2
    n_bytes = (n_odd + 7) // 8
    packed = 2 * n_bytes                 # prime bits + twin bits
    cums = 2 * 8 * (n_bytes + 1)         # int64 cumulative popcounts
    unpacked = 2 * n_odd                 # twin derivation scratch (bool)
    buffers = max(1, threads) * segment_size
    return packed + cums + unpacked + buffers


def build_sieve(
    limit: int,
    *,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    threads: int = 1,
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
) -> PrimeSieve:
    """Build an immutable PrimeSieve for [2, limit].

    segment_size is the number of odd candidates sieved per window (rounded
    up to a byte multiple); query answers do not depend on it.  threads > 1
    sieves windows concurrently with bit-identical results.
    """
    if limit < 5:
        raise ValueError(f"limit must be >= 5, got {limit}")
    if segment_size < 8:
        raise ValueError(f"segment_size must be >= 8, got {segment_size}")
    if threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads}")
    segment_size = -(-segment_size // 8) * 8

    required = _estimate_bytes(limit, segment_size, threads)
    if required > memory_budget:
        raise MemoryBudgetError(required, memory_budget)

    n_odd = (limit - 1) // 2
    n_bytes = (n_odd + 7) // 8
    base = small_primes(math.isqrt(limit))
    odd_base = [int(p) for p in base if p > 2]
    n_segments = -(-n_odd // segment_size)

    def sieve_segment(k: int) -> np.ndarray:
        lo_i = k * segment_size
        hi_i = min(lo_i + segment_size, n_odd)
        seg = np.ones(segment_size, dtype=bool)
        if hi_i - lo_i < segment_size:
            seg[hi_i - lo_i :] = False
        lo_n = 2 * lo_i + 3
        hi_n = 2 * (hi_i - 1) + 3
        for p in odd_base:
            start = p * p
            if start > hi_n:
                break
            if start < lo_n:
                start = ((lo_n + p - 1) // p) * p
                if start % 2 == 0:
                    start += p
                if start > hi_n:
                    continue
            seg[(start - lo_n) // 2 :: p] = False
        return np.packbits(seg, bitorder="little")

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(sieve_segment, range(n_segments)))
    else:
        chunks = [sieve_segment(k) for k in range(n_segments)]
    bits = np.concatenate(chunks)[:n_bytes]

    flags = np.unpackbits(bits, bitorder="little", count=n_odd).view(bool)
    twin_flags = flags[:-1] & flags[1:]
    twin_bits = np.packbits(twin_flags, bitorder="little")

    prime_cum = np.zeros(n_bytes + 1, dtype=np.int64)
    np.cumsum(_POPCOUNT[bits], out=prime_cum[1:])
    twin_cum = np.zeros(len(twin_bits) + 1, dtype=np.int64)
    np.cumsum(_POPCOUNT[twin_bits], out=twin_cum[1:])

    return PrimeSieve(limit, segment_size, bits, twin_bits, prime_cum, twin_cum)
