"""Finite-support Fourier models on the torus [0,1)^d.

A SpectralFunction is a finite map from integer frequency vectors to complex
coefficients, f(x) = sum_k c_k exp(2 pi i k.x).  Three weighted l1 norms are
supported; they differ only in the first argument of

    weight(k) = max(a(k), min_{j in supp(k)} log |k_j|)

with a(k) = 1, a(k) = width(supp(k)), or a(k) = |supp(k)|.  Logarithms are
natural throughout.  For k = 0 the minimum over the empty support is dropped
and the weight is the first argument, which is 1 in all three schemes.

Evaluation at rational points reduces the phase k.x mod 1 to exact integer
arithmetic before a single float conversion, so results are reproducible at
the bit level.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np

from .errors import DataError, DomainError, InvariantViolation
from .points import RationalPoint

_NORM_UNIT_TOL = 1e-12


@dataclass(frozen=True)
class Frequency:
    """Integer frequency vector, stored sparsely as (index, value) pairs.

    Indices are 0-based and strictly ascending; stored values are nonzero.
    """

    d: int
    terms: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.d < 1:
            raise DomainError(f"dimension must be >= 1, got {self.d}")
        last = -1
        for idx, val in self.terms:
            if not (last < idx < self.d):
                raise DomainError(f"bad term index {idx} for d={self.d}")
            if val == 0:
                raise DomainError("stored frequency values must be nonzero")
            last = idx

    @classmethod
    def from_entries(cls, entries: Iterable[int]) -> "Frequency":
        dense = tuple(int(v) for v in entries)
        if not dense:
            raise DomainError("frequency needs at least one entry")
        return cls(
            d=len(dense),
            terms=tuple((i, v) for i, v in enumerate(dense) if v != 0),
        )

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(idx for idx, _ in self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def entries(self) -> tuple[int, ...]:
        dense = [0] * self.d
        for idx, val in self.terms:
            dense[idx] = val
        return tuple(dense)

    def dense(self) -> np.ndarray:
        out = np.zeros(self.d, dtype=np.int64)
        for idx, val in self.terms:
            out[idx] = val
        return out

    def __neg__(self) -> "Frequency":
        return Frequency(self.d, tuple((i, -v) for i, v in self.terms))

    def __sub__(self, other: "Frequency") -> "Frequency":
        if self.d != other.d:
            raise DomainError("dimension mismatch in frequency subtraction")
        dense = list(self.entries())
        for idx, val in other.terms:
            dense[idx] -= val
        return Frequency.from_entries(dense)


class WeightScheme(enum.Enum):
    F1 = "f1"
    F2 = "f2"
    F3 = "f3"

    @classmethod
    def parse(cls, name: "WeightScheme | str") -> "WeightScheme":
        if isinstance(name, WeightScheme):
            return name
        try:
            return cls(name.lower())
        except ValueError as exc:
            raise DomainError(f"unknown weight scheme {name!r}") from exc


def width(indices: Iterable[int]) -> int:
    """Spread max(u) - min(u) + 1 of an index set; 1 for the empty set."""
    idx = tuple(indices)
    if not idx:
        return 1
    return max(idx) - min(idx) + 1


def weight(k: Frequency, scheme: WeightScheme | str) -> float:
    scheme = WeightScheme.parse(scheme)
    if scheme is WeightScheme.F1:
        first = 1.0
    elif scheme is WeightScheme.F2:
        first = float(width(k.support))
    else:
        first = float(len(k.terms)) if k.terms else 1.0
    if k.is_zero:
        return first
    return max(first, min(math.log(abs(v)) for _, v in k.terms))


@dataclass(frozen=True)
class SpectralFunction:
    """Finite Fourier series in canonical sparse form (no zero coefficients).

    When real_valued is set, the coefficient map must be exactly Hermitian:
    coeff(-k) == conj(coeff(k)) for every stored k, with a real constant term.
    """

    d: int
    coeffs: Mapping[Frequency, complex] = field(default_factory=dict)
    real_valued: bool = False

    def __post_init__(self) -> None:
        cleaned: dict[Frequency, complex] = {}
        for k in sorted(self.coeffs, key=lambda f: f.terms):
            c = complex(self.coeffs[k])
            if k.d != self.d:
                raise DomainError(f"frequency dimension {k.d} != function d={self.d}")
            if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                raise DataError("non-finite coefficient")
            if c != 0:
                cleaned[k] = c
        if self.real_valued:
            for k, c in cleaned.items():
                if cleaned.get(-k, 0j) != c.conjugate():
                    raise DomainError(
                        "real_valued function requires Hermitian coefficients"
                    )
                if k.is_zero and c.imag != 0.0:
                    raise DomainError("constant coefficient must be real")
        object.__setattr__(self, "coeffs", MappingProxyType(cleaned))

    @property
    def support_size(self) -> int:
        return len(self.coeffs)

    def coeff(self, k: Frequency) -> complex:
        return self.coeffs.get(k, 0j)


def norm(f: SpectralFunction, scheme: WeightScheme | str) -> float:
    """Weighted l1 norm of the coefficients; 0 iff f == 0."""
    scheme = WeightScheme.parse(scheme)
    return math.fsum(abs(c) * weight(k, scheme) for k, c in f.coeffs.items())


def integral(f: SpectralFunction) -> complex:
    """Exact integral over [0,1)^d: the constant coefficient."""
    return f.coeff(Frequency(f.d, ()))


def evaluate(f: SpectralFunction, x: RationalPoint) -> complex:
    """Evaluate at a rational point; each phase k.x mod 1 is reduced in exact
    integer arithmetic before the only float conversion."""
    if x.d != f.d:
        raise DomainError(f"point dimension {x.d} != function d={f.d}")
    denom = x.denominator
    nums = x.numerators
    re: list[float] = []
    im: list[float] = []
    for k, c in f.coeffs.items():
        t = sum(val * nums[idx] for idx, val in k.terms) % denom
        z = c * cmath.exp(2j * math.pi * (t / denom))
        re.append(z.real)
        im.append(z.imag)
    return complex(math.fsum(re), math.fsum(im))


def evaluate_at_floats(f: SpectralFunction, x: Iterable[float]) -> complex:
    """Float-phase evaluation for arbitrary (not necessarily rational) points."""
    xv = np.asarray(tuple(x), dtype=np.float64)
    if xv.shape != (f.d,):
        raise DomainError(f"point shape {xv.shape} != ({f.d},)")
    re: list[float] = []
    im: list[float] = []
    for k, c in f.coeffs.items():
        phase = math.fsum(val * xv[idx] for idx, val in k.terms) % 1.0
        z = c * cmath.exp(2j * math.pi * phase)
        re.append(z.real)
        im.append(z.imag)
    return complex(math.fsum(re), math.fsum(im))


def random_function(
    seed: int,
    d: int,
    support_budget: int,
    max_abs_freq: int,
    scheme: WeightScheme | str = WeightScheme.F2,
) -> SpectralFunction:
    """Deterministic real-valued test instance with unit norm.

    Draws support_budget distinct Hermitian frequency pairs with entries in
    [-max_abs_freq, max_abs_freq], attaches Gaussian coefficients, and scales
    so that norm(f, scheme) == 1 to within 1e-12.
    """
    scheme = WeightScheme.parse(scheme)
    if support_budget < 1:
        raise DomainError(f"support_budget must be >= 1, got {support_budget}")
    if max_abs_freq < 1:
        raise DomainError(f"max_abs_freq must be >= 1, got {max_abs_freq}")
    available = ((2 * max_abs_freq + 1) ** d - 1) // 2
    if support_budget > available:
        raise DomainError(
            f"budget {support_budget} exceeds the {available} distinct pairs"
        )
    rng = np.random.default_rng(seed)
    chosen: dict[Frequency, complex] = {}
    attempts = 0
    while len(chosen) < support_budget:
        attempts += 1
        if attempts > 10_000 * support_budget:  # tiny spaces: fill systematically
            for entries in _canonical_grid(d, max_abs_freq):
                k = Frequency.from_entries(entries)
                if k not in chosen:
                    a, b = rng.standard_normal(2)
                    chosen[k] = complex(a, b)
                    if len(chosen) == support_budget:
                        break
            break
        entries = rng.integers(-max_abs_freq, max_abs_freq + 1, size=d)
        if not entries.any():
            continue
        for v in entries:
            if v != 0:
                if v < 0:
                    entries = -entries
                break
        k = Frequency.from_entries(entries)
        if k in chosen:
            continue
        a, b = rng.standard_normal(2)
        chosen[k] = complex(a, b)
    coeffs: dict[Frequency, complex] = {}
    for k, c in chosen.items():
        coeffs[k] = c
        coeffs[-k] = c.conjugate()
    f = SpectralFunction(d=d, coeffs=coeffs, real_valued=True)
    scale = norm(f, scheme)
    f = SpectralFunction(
        d=d,
        coeffs={k: c / scale for k, c in coeffs.items()},
        real_valued=True,
    )
    if abs(norm(f, scheme) - 1.0) > _NORM_UNIT_TOL:  # pragma: no cover
        raise InvariantViolation("normalization failed to reach unit norm")
    return f


def _canonical_grid(d: int, max_abs: int):
    import itertools

    for entries in itertools.product(range(-max_abs, max_abs + 1), repeat=d):
        for v in entries:
            if v > 0:
                yield entries
                break
            if v < 0:
                break


# ---------------------------------------------------------------------------
# JSON function format:
#   {"d": 2, "real": true,
#    "coeffs": [{"k": [[0, 3], [1, -7]], "re": 0.5, "im": 0.0}, ...]}
# "k" lists sparse (index, value) pairs with 0-based ascending indices; a
# constant term has "k": [].
# ---------------------------------------------------------------------------


def to_json_dict(f: SpectralFunction) -> dict:
    return {
        "d": f.d,
        "real": f.real_valued,
        "coeffs": [
            {"k": [[i, v] for i, v in k.terms], "re": c.real, "im": c.imag}
            for k, c in f.coeffs.items()
        ],
    }


def from_json_dict(obj: dict) -> SpectralFunction:
    try:
        d = int(obj["d"])
        real = bool(obj.get("real", False))
        coeffs: dict[Frequency, complex] = {}
        for item in obj["coeffs"]:
            k = Frequency(d, tuple((int(i), int(v)) for i, v in item["k"]))
            coeffs[k] = complex(float(item["re"]), float(item.get("im", 0.0)))
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"malformed function document: {exc}") from exc
    return SpectralFunction(d=d, coeffs=coeffs, real_valued=real)
