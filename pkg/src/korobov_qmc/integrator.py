"""Equal-weight QMC over union point sets, exact errors, and certificates.

For a finite Fourier model the integration error of the equal-weight rule is
exactly

    |I(f) - Q(f)| = |sum_{k != 0} c_k * (normalized union sum at k)|,

so the worst-case error over the unit ball of the width-weighted norm is
bounded by the largest union-sum bound, which is 16/(c_p * m) whenever the
window's least prime exceeds the dimension.  wc_bound packages that bound as
a certificate; plan inverts it, picking the smallest m that reaches a target
accuracy while honouring the dimension constraint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import DataError, DomainError
from .expsums import _phase_indices, _phases, expsum_union_many
from .fourier import SpectralFunction
from .points import KorobovSet, RationalPoint, UnionPointSet
from .primes import DensityConstants, enumerate_window


@dataclass(frozen=True, eq=False)
class LinearAlgorithm:
    """Sampling nodes plus weights; a QMC rule has all weights equal to 1/n."""

    rational_nodes: tuple[RationalPoint, ...] | None
    float_nodes: np.ndarray
    weights: np.ndarray

    @classmethod
    def from_nodes(
        cls,
        nodes: Sequence[RationalPoint] | np.ndarray,
        weights: Sequence[float] | np.ndarray | None = None,
    ) -> "LinearAlgorithm":
        if len(nodes) == 0:
            raise DomainError("an algorithm needs at least one node")
        if isinstance(nodes[0], RationalPoint):
            rational = tuple(nodes)
            d = rational[0].d
            if any(pt.d != d for pt in rational):
                raise DomainError("nodes have mixed dimensions")
            floats = np.vstack([pt.as_floats() for pt in rational])
        else:
            rational = None
            floats = np.asarray(nodes, dtype=np.float64)
            if floats.ndim != 2:
                raise DomainError(f"float nodes must be 2-d, got shape {floats.shape}")
        if not np.isfinite(floats).all():
            raise DataError("non-finite node coordinates")
        n = floats.shape[0]
        w = (
            np.full(n, 1.0 / n)
            if weights is None
            else np.asarray(weights, dtype=np.float64)
        )
        if w.shape != (n,):
            raise DomainError(f"{n} nodes but weight shape {w.shape}")
        if not np.isfinite(w).all():
            raise DataError("non-finite weights")
        return cls(rational_nodes=rational, float_nodes=floats, weights=w)

    @classmethod
    def qmc(cls, nodes: Sequence[RationalPoint] | np.ndarray) -> "LinearAlgorithm":
        return cls.from_nodes(nodes, weights=None)

    @property
    def n(self) -> int:
        return self.float_nodes.shape[0]

    @property
    def d(self) -> int:
        return self.float_nodes.shape[1]


@dataclass(frozen=True)
class ErrorCertificate:
    """Worst-case bound 16/(c_p * m) for the union rule at window size m.

    Valid for every dimension d <= d_max (d_max + 1 is the window's least
    prime) and conditional on the density constants' envelope.
    """

    m: int
    c_p: float
    bound: float
    d_max: int
    n: int


def _spectral_set_sum(f: SpectralFunction, kset: KorobovSet) -> complex:
    """Pointwise values of f over one p-set, summed in canonical point order."""
    values = np.zeros(len(kset), dtype=np.complex128)
    denom = kset.denominator
    for k, c in f.coeffs.items():
        t = _phase_indices(kset, k.dense()[None, :])[:, 0]
        values += c * _phases(t, denom)
    return complex(values.sum())


def qmc_apply(
    f: SpectralFunction | Callable[[np.ndarray], float], uset: UnionPointSet
) -> complex | float:
    """Equal-weight average of f over all union points.

    SpectralFunctions are evaluated through exact integer phases and the
    result is complex; black-box callables receive float coordinates (one
    conversion per point) and must return finite reals.
    """
    if isinstance(f, SpectralFunction):
        if f.d != uset.d:
            raise DomainError(f"function d={f.d} != point-set d={uset.d}")
        total = sum(_spectral_set_sum(f, kset) for kset in uset.sets)
        return total / uset.n
    samples: list[float] = []
    for pt in uset.points():
        v = float(f(pt.as_floats()))
        if not math.isfinite(v):
            raise DataError(f"integrand returned non-finite value {v!r}")
        samples.append(v)
    return math.fsum(samples) / uset.n


def exact_error(f: SpectralFunction, uset: UnionPointSet) -> float:
    """|I(f) - Q(f)| from the spectral side: coefficients times union sums."""
    if f.d != uset.d:
        raise DomainError(f"function d={f.d} != point-set d={uset.d}")
    ks = [k for k in f.coeffs if not k.is_zero]
    if not ks:
        return 0.0
    sums = expsum_union_many(ks, uset)
    re = math.fsum((f.coeffs[k] * s).real for k, s in zip(ks, sums))
    im = math.fsum((f.coeffs[k] * s).imag for k, s in zip(ks, sums))
    return abs(complex(re, im))


@lru_cache(maxsize=256)
def smallest_admissible_m(d: int) -> int:
    """Least m whose window's smallest prime exceeds d."""
    if d < 1:
        raise DomainError(f"dimension must be >= 1, got {d}")
    m = 2
    while enumerate_window(m).min_prime <= d:
        m += 1
    return m


def wc_bound(m: int, consts: DensityConstants, d: int) -> ErrorCertificate:
    """Certificate for the union rule at window size m, dimension d."""
    window = enumerate_window(m)
    if window.min_prime <= d:
        raise DomainError(
            f"window({m}) least prime {window.min_prime} <= d={d}; "
            f"smallest admissible m is {smallest_admissible_m(d)}"
        )
    return ErrorCertificate(
        m=m,
        c_p=consts.c_p,
        bound=16.0 / (consts.c_p * m),
        d_max=window.min_prime - 1,
        n=sum(p * p for p in window.primes),
    )


class PlanResult(NamedTuple):
    m: int
    n: int


def plan(eps: float, d: int, consts: DensityConstants) -> PlanResult:
    """Window size (and point budget) reaching worst-case error <= eps.

    m = ceil(16 / (c_p * eps)), raised if needed so the window's least prime
    exceeds d.  The 1e-9 back-off keeps an exactly-integer quotient from
    ceiling up on float rounding.
    """
    if not (0.0 < eps < 1.0):
        raise DomainError(f"eps must be in (0,1), got {eps}")
    m = max(
        math.ceil(16.0 / (consts.c_p * eps) - 1e-9),
        smallest_admissible_m(d),
    )
    n = sum(p * p for p in enumerate_window(m).primes)
    return PlanResult(m=m, n=n)
