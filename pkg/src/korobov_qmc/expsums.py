"""Exponential sums over p-sets and union sets, with proof-backed bounds.

The normalized sum over an S-kind set,

    (1/p^2) sum_h exp(2 pi i k.x_h),

decomposes exactly into a sum over the roots h0 of the congruence

    sum_{j in supp(k)} k_j * j * h0^(j-1) == 0  (mod p),

of the phases exp(2 pi i (sum_j k_j h0^j mod p^2) / p^2) / p: the inner
complete character sum kills every non-root.  For p > d and k not divisible
by p the congruence has at most width(supp(k)) roots, which yields the
single-set bound width(supp(k))/p.  Averaging over a window of primes, the
p-divisibility exceptions are controlled by the number of window primes
dividing every support entry of k, giving the union bound

    (4 * width(supp(k)) + (8/c_p) * min_j log |k_j|) / m.

All phases are reduced to (integer mod denom)/denom before any trigonometric
call, and sums run in canonical point order with pairwise accumulation, so
bound assertions are meaningful at 1e-12 slack.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .fourier import Frequency, width
from .points import KorobovSet, UnionPointSet, s_set
from .primes import DensityConstants, PrimeWindow, enumerate_window

SLACK = 1e-12
_DECOMPOSITION_TOL = 1e-10
_TABLE_LIMIT = 1 << 16


@dataclass(frozen=True)
class ExpSumResult:
    """A normalized exponential sum; |value| <= 1 always."""

    value: complex
    n_terms: int
    set_kind: str
    p_or_m: int


@dataclass(frozen=True)
class BoundReport:
    lhs: float
    rhs: float
    satisfied: bool
    slack: float

    @classmethod
    def compare(cls, lhs: float, rhs: float) -> "BoundReport":
        return cls(lhs=lhs, rhs=rhs, satisfied=lhs <= rhs + SLACK, slack=rhs - lhs)


@lru_cache(maxsize=64)
def _unit_circle(denom: int) -> np.ndarray:
    t = np.arange(denom, dtype=np.float64)
    return np.exp((2j * np.pi / denom) * t)


def _phases(t: np.ndarray, denom: int) -> np.ndarray:
    if denom <= _TABLE_LIMIT:
        return _unit_circle(denom)[t]
    return np.exp((2j * np.pi / denom) * t)


def _dense_frequencies(ks, d: int) -> np.ndarray:
    if isinstance(ks, Frequency):
        ks = [ks]
    arr = np.asarray(
        [k.dense() if isinstance(k, Frequency) else np.asarray(k) for k in ks],
        dtype=np.int64,
    )
    if arr.ndim != 2 or arr.shape[1] != d:
        raise DomainError(f"frequency block shape {arr.shape} incompatible with d={d}")
    return arr


def _phase_indices(kset: KorobovSet, kd: np.ndarray) -> np.ndarray:
    """Integer phase numerators (table @ k) mod denom, shape (p^2, nk)."""
    denom = kset.denominator
    kmax = int(np.abs(kd).max(initial=0))
    if kmax * denom * kset.d >= (1 << 62):  # keep int64 products exact
        table = kset.numerators.astype(object)
        return np.asarray((table @ kd.T) % denom, dtype=np.int64)
    return (kset.numerators @ kd.T) % denom


def raw_sums(ks, kset: KorobovSet) -> np.ndarray:
    """Unnormalized sums sum_x exp(2 pi i k.x) for a block of frequencies."""
    kd = _dense_frequencies(ks, kset.d)
    n = len(kset)
    out = np.empty(kd.shape[0], dtype=np.complex128)
    chunk = max(1, 4_000_000 // max(n, 1))
    for lo in range(0, kd.shape[0], chunk):
        t = _phase_indices(kset, kd[lo : lo + chunk])
        out[lo : lo + chunk] = _phases(t, kset.denominator).sum(axis=0)
    return out


def expsum_many(ks, kset: KorobovSet) -> np.ndarray:
    """Normalized sums for a block of frequencies over one p-set."""
    return raw_sums(ks, kset) / len(kset)


def expsum_single(k: Frequency, kset: KorobovSet) -> ExpSumResult:
    if k.d != kset.d:
        raise DomainError(f"frequency d={k.d} != set d={kset.d}")
    value = complex(expsum_many([k], kset)[0])
    return ExpSumResult(
        value=value, n_terms=len(kset), set_kind=kset.kind.value, p_or_m=kset.p
    )


def expsum_union_many(ks, uset: UnionPointSet) -> np.ndarray:
    """Normalized sums over the multiset union (flat average over all points)."""
    kd = _dense_frequencies(ks, uset.d)
    total = np.zeros(kd.shape[0], dtype=np.complex128)
    for kset in uset.sets:
        total += raw_sums(kd, kset)
    return total / uset.n


def expsum_union(k: Frequency, uset: UnionPointSet) -> ExpSumResult:
    if k.d != uset.d:
        raise DomainError(f"frequency d={k.d} != union d={uset.d}")
    value = complex(expsum_union_many([k], uset)[0])
    return ExpSumResult(
        value=value, n_terms=uset.n, set_kind=uset.kind.value, p_or_m=uset.m
    )


# ---------------------------------------------------------------------------
# Congruence root counts and the exact S-sum decomposition.
# ---------------------------------------------------------------------------


def _derivative_values(kd: np.ndarray, p: int) -> np.ndarray:
    """Values of sum_j k_j * j * h0^(j-1) mod p for h0 = 0..p-1, one column
    per frequency (j is the 1-based coordinate index)."""
    d = kd.shape[1]
    j = np.arange(1, d + 1, dtype=np.int64)
    coeff = (kd % p) * j % p  # exponent j-1 gets coefficient k_j * j
    h = np.arange(p, dtype=np.int64)
    powers = np.empty((p, d), dtype=np.int64)
    cur = np.ones(p, dtype=np.int64)
    for e in range(d):
        powers[:, e] = cur
        cur = (cur * h) % p
    return (powers @ coeff.T) % p


def congruence_roots(k: Frequency, p: int) -> np.ndarray:
    """All h0 in {0..p-1} solving the root-count congruence for k."""
    if k.is_zero:
        raise DomainError("root counting requires k != 0")
    vals = _derivative_values(k.dense()[None, :], p)[:, 0]
    return np.nonzero(vals == 0)[0].astype(np.int64)


def root_count(k: Frequency, p: int) -> int:
    return int(congruence_roots(k, p).size)


def decomposition_residuals(ks, p: int, d: int) -> np.ndarray:
    """|full S-sum - root-phase reduced sum| for a block of frequencies."""
    if p <= d:
        raise DomainError(f"decomposition check requires p > d, got p={p}, d={d}")
    kd = _dense_frequencies(ks, d)
    if (kd == 0).all(axis=1).any():
        raise DomainError("decomposition check requires k != 0")
    kset = s_set(p, d)
    full = expsum_many(kd, kset)
    roots_mask = _derivative_values(kd, p) == 0  # (p, nk)
    t = _phase_indices(kset, kd)[:p]  # S-set rows h = 0..p-1
    phases = _phases(t, kset.denominator)
    reduced = (phases * roots_mask).sum(axis=0) / p
    return np.abs(full - reduced)


def decomposition_check(k: Frequency, p: int) -> BoundReport:
    """Exact identity check: S-sum vs its congruence-root reduction."""
    residual = float(decomposition_residuals([k], p, k.d)[0])
    return BoundReport.compare(residual, _DECOMPOSITION_TOL)


# ---------------------------------------------------------------------------
# Bounds.
# ---------------------------------------------------------------------------


def divides_all(p: int, k: Frequency) -> bool:
    """True iff p divides every support entry of k (vacuously false for k=0)."""
    return bool(k.terms) and all(v % p == 0 for _, v in k.terms)


def lemma_bound(k: Frequency, p: int) -> float:
    """Single-set bound width(supp(k))/p; requires p > d and p not dividing k
    (otherwise only the trivial bound 1 applies)."""
    if k.is_zero:
        raise DomainError("bound requires k != 0")
    if p <= k.d:
        raise DomainError(f"bound requires p > d, got p={p}, d={k.d}")
    if divides_all(p, k):
        raise DomainError(f"p={p} divides k: only the trivial bound 1 applies")
    return width(k.support) / p


def divisor_count(k: Frequency, window: PrimeWindow) -> int:
    """Number of window primes dividing every support entry of k."""
    if k.is_zero:
        raise DomainError("divisor count requires k != 0")
    g = 0
    for _, v in k.terms:
        g = math.gcd(g, abs(v))
    return sum(1 for p in window.primes if g % p == 0)


def min_log(k: Frequency) -> float:
    """min over the support of log |k_j|; 0.0 for k = 0 (empty support)."""
    if k.is_zero:
        return 0.0
    return min(math.log(abs(v)) for _, v in k.terms)


def corollary_bound(k: Frequency, m: int, consts: DensityConstants) -> float:
    """Union-set bound (4*width + (8/c_p)*min log|k_j|)/m.

    Valid whenever the window's least prime exceeds d; may exceed 1, in which
    case the trivial bound dominates.
    """
    if k.is_zero:
        raise DomainError("bound requires k != 0")
    window = enumerate_window(m)
    if window.min_prime <= k.d:
        raise DomainError(
            f"window({m}) has least prime {window.min_prime} <= d={k.d}"
        )
    return (4.0 * width(k.support) + (8.0 / consts.c_p) * min_log(k)) / m


def single_sum_report(
    k: Frequency, kset: KorobovSet
) -> tuple[ExpSumResult, BoundReport]:
    """Sum plus the applicable bound: width/p when it applies, else trivial 1."""
    result = expsum_single(k, kset)
    try:
        bound = lemma_bound(k, kset.p)
    except DomainError:
        bound = 1.0
    return result, BoundReport.compare(abs(result.value), bound)


def union_sum_report(
    k: Frequency, uset: UnionPointSet, consts: DensityConstants
) -> tuple[ExpSumResult, BoundReport]:
    result = expsum_union(k, uset)
    try:
        bound = corollary_bound(k, uset.m, consts)
    except DomainError:
        bound = 1.0
    return result, BoundReport.compare(abs(result.value), bound)
