"""Prime windows (ceil(m/2), m] and empirical density constants.

The point-set constructions in this package draw one p-set per prime in the
half-open window above m/2.  Every prime p in the window satisfies 2p > m, so
distinct window primes are pairwise coprime denominators.  The window size is
proportional to m/log m; the proportionality constants are not pinned down by
theory alone, so we calibrate them empirically over a sweep of m and ship the
calibrated values as overridable defaults.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError

# Above this limit enumerate_window switches to a segmented sieve so that only
# O(sqrt(m) + m/2) memory is touched.
_SEGMENT_THRESHOLD = 10**7

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n == p:
            return True
        if n % p == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = (x * x) % n
            if x == n - 1:
                break
        else:
            return False
    return True


def sieve_flags(limit: int) -> bytearray:
    """Eratosthenes flags: flags[i] == 1 iff i is prime, for 0 <= i <= limit."""
    flags = bytearray(b"\x01") * (limit + 1)
    flags[:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            start = p * p
            flags[start : limit + 1 : p] = b"\x00" * ((limit - start) // p + 1)
    return flags


def _primes_in_range_segmented(lo: int, hi: int) -> list[int]:
    # sieve (lo, hi] against the base primes <= sqrt(hi)
    base = [i for i, f in enumerate(sieve_flags(math.isqrt(hi))) if f]
    size = hi - lo
    seg = bytearray(b"\x01") * size  # seg[i] represents lo + 1 + i
    for p in base:
        start = max(p * p, ((lo + 1 + p - 1) // p) * p)
        if start > hi:
            continue
        seg[start - lo - 1 : size : p] = b"\x00" * ((hi - start) // p + 1)
    return [lo + 1 + i for i, f in enumerate(seg) if f and lo + 1 + i >= 2]


def window_floor(m: int) -> int:
    """Exclusive lower end ceil(m/2) of the window for m."""
    return (m + 1) // 2


@lru_cache(maxsize=512)
def _window_primes(m: int) -> tuple[int, ...]:
    lo = window_floor(m)
    if m <= _SEGMENT_THRESHOLD:
        flags = sieve_flags(m)
        return tuple(i for i in range(lo + 1, m + 1) if flags[i])
    return tuple(_primes_in_range_segmented(lo, m))


@dataclass(frozen=True)
class PrimeWindow:
    """All primes p with ceil(m/2) < p <= m, in ascending order."""

    m: int
    primes: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self):
        return iter(self.primes)

    @property
    def min_prime(self) -> int:
        return self.primes[0]

    def __contains__(self, p: int) -> bool:
        return p in self.primes


def enumerate_window(m: int) -> PrimeWindow:
    """Window of primes in (ceil(m/2), m]; nonempty for every m >= 2."""
    if m < 2:
        raise DomainError(f"window requires m >= 2, got {m}")
    return PrimeWindow(m=m, primes=_window_primes(m))


def density_ratio(m: int) -> float:
    """Diagnostic ratio |window(m)| * log(m) / m."""
    if m < 2:
        raise DomainError(f"density_ratio requires m >= 2, got {m}")
    return len(_window_primes(m)) * math.log(m) / m


@dataclass(frozen=True)
class DensityConstants:
    """Window-density envelope: c_p * m/log m <= |window(m)| <= C_p * m/log m.

    Guaranteed to hold for every 2 <= m <= calibrated_up_to.  Error
    certificates built from these constants are conditional on the envelope,
    which is checked, not proven, beyond the calibrated range.
    """

    c_p: float
    C_p: float
    calibrated_up_to: int

    def __post_init__(self) -> None:
        if not (0.0 < self.c_p < min(1.0, self.C_p)):
            raise DomainError(
                f"need 0 < c_p < min(1, C_p), got c_p={self.c_p}, C_p={self.C_p}"
            )

    def lower(self, m: int) -> float:
        return self.c_p * m / math.log(m)

    def upper(self, m: int) -> float:
        return self.C_p * m / math.log(m)


def window_counts_up_to(m_max: int) -> np.ndarray:
    """Vector of window sizes |window(m)| for m = 0..m_max (0 for m < 2)."""
    if m_max < 2:
        raise DomainError(f"need m_max >= 2, got {m_max}")
    flags = np.frombuffer(bytes(sieve_flags(m_max)), dtype=np.uint8)
    cum = np.concatenate(([0], np.cumsum(flags)))  # cum[i] = #primes <= i-1
    m = np.arange(m_max + 1)
    counts = cum[m + 1] - cum[(m + 1) // 2 + 1]
    counts[:2] = 0
    return counts


def calibrate_constants(m_max: int) -> DensityConstants:
    """Sweep m = 2..m_max; floor the minimum ratio and ceil the maximum to 3
    decimals so the envelope holds with a little slack at the extremes."""
    if m_max < 2:
        raise DomainError(f"calibrate requires m_max >= 2, got {m_max}")
    counts = window_counts_up_to(m_max)
    m = np.arange(2, m_max + 1, dtype=np.float64)
    ratios = counts[2:] * np.log(m) / m
    c_p = math.floor(ratios.min() * 1000.0) / 1000.0
    C_p = math.ceil(ratios.max() * 1000.0) / 1000.0
    return DensityConstants(c_p=c_p, C_p=C_p, calibrated_up_to=m_max)


# Calibration sweep over 2 <= m <= 1e5: the minimum ratio 0.23026 occurs at
# m = 10 (single prime 7), the maximum 0.61988 at m = 19 (primes 11..19).
DEFAULT_CONSTANTS = DensityConstants(c_p=0.230, C_p=0.620, calibrated_up_to=100_000)
