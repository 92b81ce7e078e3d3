"""Brute-force reference implementations, used only by tests.

Everything here deliberately takes a different arithmetic path from the main
modules: float phases instead of exact integer reduction, repeated addition
instead of modular exponentiation, trial division instead of sieving.  Slow
is fine; independence is the point.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .fourier import Frequency
from .points import KorobovSet


@dataclass
class OracleReport:
    subject: str
    max_abs_diff: float
    cases_run: int
    worst_case: str

    def record(self, diff: float, label: str) -> None:
        self.cases_run += 1
        if diff > self.max_abs_diff:
            self.max_abs_diff = diff
            self.worst_case = label


def oracle_expsum(k: Frequency, kset: KorobovSet) -> complex:
    """Naive normalized sum with float dot-product phases."""
    dense = k.entries()
    total = 0j
    for pt in kset:
        x = pt.as_floats()
        phase = 0.0
        for j in range(kset.d):
            phase += dense[j] * x[j]
        total += cmath.exp(2j * math.pi * phase)
    return total / len(kset)


def _mulmod_by_addition(a: int, b: int, p: int) -> int:
    acc = 0
    for _ in range(b % p):
        acc += a % p
        if acc >= p:
            acc -= p
    return acc


def oracle_roots(k: Frequency, p: int) -> int:
    """Count congruence roots by evaluating the polynomial at every h0 with
    multiplication done as repeated addition (no modular exponentiation)."""
    dense = k.entries()
    count = 0
    for h0 in range(p):
        value = 0
        for j1, kj in enumerate(dense, start=1):
            if kj == 0:
                continue
            term = (kj * j1) % p
            power = 1 % p  # h0^(j1-1), built by repeated multiplication
            for _ in range(j1 - 1):
                power = _mulmod_by_addition(power, h0, p)
            value = (value + _mulmod_by_addition(term, power, p)) % p
        if value == 0:
            count += 1
    return count


def trial_division_is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def oracle_recount_primes(m: int) -> int:
    """Trial-division count of primes in (ceil(m/2), m]."""
    lo = (m + 1) // 2
    return sum(1 for v in range(lo + 1, m + 1) if trial_division_is_prime(v))
