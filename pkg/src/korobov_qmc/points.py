"""Korobov p-sets with exact rational coordinates, and their multiset unions.

A p-set holds p^2 points.  The S variant places point h at
({h/p^2}, {h^2/p^2}, ..., {h^d/p^2}); the T variant places point (h, l) at
({hl/p}, {hl^2/p}, ..., {hl^d/p}).  Coordinates are kept as integer
numerators over the common denominator (p^2 or p), so phases of the form
k.x mod 1 reduce to exact integer arithmetic.

The union set for a given m concatenates one p-set per prime in the window
(ceil(m/2), m], keeping duplicates (multiset semantics).  Point order is
canonical: window primes ascending, then index h (or h*p + l) ascending.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property
from typing import IO, Iterator

import numpy as np

from .errors import DataError, DomainError
from .primes import PrimeWindow, enumerate_window, is_prime

# Numerator matrices are materialized and cached up to this many points;
# larger sets generate points one at a time.
MATERIALIZE_LIMIT = 10**6


class SetKind(enum.Enum):
    S = "S"
    T = "T"


class UnionKind(enum.Enum):
    P1 = "P1"
    P2 = "P2"

    @property
    def set_kind(self) -> SetKind:
        return SetKind.S if self is UnionKind.P1 else SetKind.T


@dataclass(frozen=True)
class RationalPoint:
    """A point of [0,1)^d stored as numerators over one common denominator."""

    numerators: tuple[int, ...]
    denominator: int

    def __post_init__(self) -> None:
        if self.denominator < 1:
            raise DomainError(f"denominator must be positive, got {self.denominator}")
        if any(not (0 <= v < self.denominator) for v in self.numerators):
            raise DomainError("numerators must lie in [0, denominator)")

    @property
    def d(self) -> int:
        return len(self.numerators)

    def as_floats(self) -> np.ndarray:
        return np.asarray(self.numerators, dtype=np.float64) / self.denominator


@dataclass(frozen=True)
class KorobovSet:
    """One p-set (S or T kind) of p^2 points in dimension d.

    Acts as a lazy sequence of RationalPoint; `numerators` materializes the
    full integer coordinate matrix (rows in canonical index order).
    """

    kind: SetKind
    p: int
    d: int

    def __post_init__(self) -> None:
        if self.d < 1:
            raise DomainError(f"dimension must be >= 1, got {self.d}")
        if not is_prime(self.p):
            raise DomainError(f"p must be prime, got {self.p}")

    def __len__(self) -> int:
        return self.p * self.p

    @property
    def denominator(self) -> int:
        return self.p * self.p if self.kind is SetKind.S else self.p

    def point(self, index: int) -> RationalPoint:
        """Point at canonical position index (h for S, h*p + l for T)."""
        if not (0 <= index < len(self)):
            raise DomainError(f"index {index} out of range for {len(self)} points")
        if self.kind is SetKind.S:
            q = self.p * self.p
            nums = tuple(pow(index, j, q) for j in range(1, self.d + 1))
            return RationalPoint(nums, q)
        h, ell = divmod(index, self.p)
        nums = tuple(h * pow(ell, j, self.p) % self.p for j in range(1, self.d + 1))
        return RationalPoint(nums, self.p)

    def __iter__(self) -> Iterator[RationalPoint]:
        if len(self) <= MATERIALIZE_LIMIT:
            denom = self.denominator
            for row in self.numerators:
                yield RationalPoint(tuple(int(v) for v in row), denom)
        else:
            for i in range(len(self)):
                yield self.point(i)

    @cached_property
    def numerators(self) -> np.ndarray:
        """Integer coordinate matrix, shape (p^2, d), entries in [0, denom).

        int64 is safe: rows hold residues < denom and the iterative update
        multiplies two residues < denom <= 1e6 at materialized sizes.
        """
        p = self.p
        if self.kind is SetKind.S:
            q = p * p
            h = np.arange(q, dtype=np.int64)
            cols = np.empty((self.d, q), dtype=np.int64)
            cur = h % q
            cols[0] = cur
            for j in range(1, self.d):
                cur = (cur * h) % q
                cols[j] = cur
            return cols.T.copy()
        h = np.repeat(np.arange(p, dtype=np.int64), p)
        ell = np.tile(np.arange(p, dtype=np.int64), p)
        cols = np.empty((self.d, p * p), dtype=np.int64)
        cur = ell % p
        cols[0] = (h * cur) % p
        for j in range(1, self.d):
            cur = (cur * ell) % p
            cols[j] = (h * cur) % p
        return cols.T.copy()


def s_set(p: int, d: int) -> KorobovSet:
    """S-kind p-set: point h has coordinate j equal to h^j mod p^2 over p^2."""
    return KorobovSet(kind=SetKind.S, p=p, d=d)


def t_set(p: int, d: int) -> KorobovSet:
    """T-kind p-set: point (h, l) has coordinate j equal to h*l^j mod p over p."""
    return KorobovSet(kind=SetKind.T, p=p, d=d)


@dataclass(frozen=True)
class UnionPointSet:
    """Multiset union of one p-set per window prime (duplicates retained)."""

    kind: UnionKind
    m: int
    d: int
    window: PrimeWindow
    sets: tuple[KorobovSet, ...]

    @property
    def n(self) -> int:
        return sum(p * p for p in self.window.primes)

    def __len__(self) -> int:
        return self.n

    def points(self) -> Iterator[RationalPoint]:
        for kset in self.sets:
            yield from kset

    def __iter__(self) -> Iterator[RationalPoint]:
        return self.points()


def union_set(kind: UnionKind | str, m: int, d: int) -> UnionPointSet:
    if isinstance(kind, str):
        name = {"S": "P1", "T": "P2"}.get(kind.upper(), kind.upper())
        try:
            kind = UnionKind[name]
        except KeyError as exc:
            raise DomainError(f"unknown union kind {kind!r}") from exc
    window = enumerate_window(m)  # raises for m < 2; nonempty by Bertrand
    sets = tuple(KorobovSet(kind=kind.set_kind, p=p, d=d) for p in window.primes)
    return UnionPointSet(kind=kind, m=m, d=d, window=window, sets=sets)


# ---------------------------------------------------------------------------
# Text export format: one block per p-set.  Header line
#   # kind=<S|T> p=<p> d=<d> denom=<p or p^2>
# followed by p^2 lines of d space-separated numerators in canonical order.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PointBlock:
    """One parsed export block (raw numerators; not revalidated as a p-set)."""

    kind: SetKind
    p: int
    d: int
    denominator: int
    numerators: np.ndarray

    def rational_points(self) -> list[RationalPoint]:
        return [
            RationalPoint(tuple(int(v) for v in row), self.denominator)
            for row in self.numerators
        ]


def write_points(uset: UnionPointSet, stream: IO[str]) -> None:
    for kset in uset.sets:
        stream.write(
            f"# kind={kset.kind.value} p={kset.p} d={kset.d} denom={kset.denominator}\n"
        )
        for pt in kset:
            stream.write(" ".join(str(v) for v in pt.numerators))
            stream.write("\n")


def read_points(stream: IO[str]) -> list[PointBlock]:
    blocks: list[PointBlock] = []
    header: dict[str, str] | None = None
    rows: list[list[int]] = []

    def flush() -> None:
        nonlocal header, rows
        if header is None:
            return
        arr = np.asarray(rows, dtype=np.int64)
        blocks.append(
            PointBlock(
                kind=SetKind(header["kind"]),
                p=int(header["p"]),
                d=int(header["d"]),
                denominator=int(header["denom"]),
                numerators=arr.reshape((len(rows), int(header["d"]))),
            )
        )
        header, rows = None, []

    for line in stream:
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            flush()
            try:
                header = dict(part.split("=", 1) for part in line[1:].split())
            except ValueError as exc:
                raise DataError(f"malformed block header: {line!r}") from exc
            continue
        if header is None:
            raise DataError("point rows before any block header")
        rows.append([int(tok) for tok in line.split()])
    flush()
    if not blocks:
        raise DataError("no point blocks found")
    return blocks
