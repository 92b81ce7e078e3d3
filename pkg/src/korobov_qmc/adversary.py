"""Adversarial fooling functions witnessing the worst-case lower bound.

Given any linear algorithm on n nodes, pick the index set

    A = {0} union {k e_j : axis j, 1 <= k <= ceil(n/d)},

which has 1 + d*ceil(n/d) > n frequencies.  A nonzero coefficient vector in
the nullspace of the n x |A| phase matrix yields a trigonometric polynomial
vanishing at every node.  After normalizing so the largest coefficient is
exactly 1 (at the pivot frequency l), modulating by exp(-2 pi i l.x) and
symmetrizing produces a real function g* that still vanishes at the nodes,
has unit-ball norm under the max(1, min log|k_j|) weights, and integrates to

    C = 1 / max_{l' in A} sum_{k in A} max(1, min_{j in supp(k)} log|k_j - l'_j|).

For n > 2d this constant is at least d/(2 n^2), so every linear algorithm is
fooled by at least that much.  The norm certificate is asserted at the true
shifted frequencies k - l, which for this axis-aligned A is never larger
than the counting constant above.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import DataError, DomainError
from .expsums import BoundReport
from .fourier import (
    Frequency,
    SpectralFunction,
    WeightScheme,
    evaluate,
    evaluate_at_floats,
    integral,
    norm,
)
from .integrator import LinearAlgorithm
from .points import RationalPoint

_PIVOT_THRESHOLD = 1e-12
_RESIDUAL_TOL = 1e-8
_NORM_TOL = 1e-9
_BOUND_TOL = 1e-12


@dataclass(frozen=True)
class FoolingIndexSet:
    """The axis-aligned index set A; frequencies in canonical order
    (zero first, then axis by axis with k ascending)."""

    d: int
    n: int
    frequencies: tuple[Frequency, ...]

    @property
    def per_axis(self) -> int:
        return -(-self.n // self.d)  # ceil(n/d)

    def __len__(self) -> int:
        return len(self.frequencies)


def build_index_set(n: int, d: int) -> FoolingIndexSet:
    if n < 1 or d < 1:
        raise DomainError(f"need n >= 1 and d >= 1, got n={n}, d={d}")
    per_axis = -(-n // d)
    freqs: list[Frequency] = [Frequency(d, ())]
    for axis in range(d):
        for k in range(1, per_axis + 1):
            freqs.append(Frequency(d, ((axis, k),)))
    return FoolingIndexSet(d=d, n=n, frequencies=tuple(freqs))


def _node_phase_row(node, freqs: Sequence[Frequency]) -> np.ndarray:
    if isinstance(node, RationalPoint):
        denom = node.denominator
        row = [
            cmath.exp(
                2j
                * math.pi
                * ((sum(v * node.numerators[i] for i, v in k.terms) % denom) / denom)
            )
            for k in freqs
        ]
    else:
        x = np.asarray(node, dtype=np.float64)
        row = [
            cmath.exp(
                2j * math.pi * (math.fsum(v * x[i] for i, v in k.terms) % 1.0)
            )
            for k in freqs
        ]
    return np.asarray(row, dtype=np.complex128)


def phase_matrix(
    nodes: Sequence[RationalPoint] | np.ndarray, iset: FoolingIndexSet
) -> np.ndarray:
    """n x |A| matrix of exp(2 pi i k.x_h); exact phases for rational nodes."""
    rows = [_node_phase_row(node, iset.frequencies) for node in nodes]
    matrix = np.vstack(rows)
    if not np.isfinite(matrix).all():
        raise DataError("non-finite phase matrix (bad node coordinates)")
    return matrix


def nullspace_vector(
    nodes: Sequence[RationalPoint] | np.ndarray, iset: FoolingIndexSet
) -> np.ndarray:
    """A nonzero c with sum_k c_k exp(2 pi i k.x_h) = 0 for every node.

    Gaussian elimination with per-row column pivoting (largest modulus,
    lowest column on ties); rows whose remaining entries fall below
    1e-12 times the initial row norm contribute no pivot.  Free columns are
    set to 0 except the lowest-indexed one, which is set to 1.
    """
    m_cols = len(iset)
    e = phase_matrix(nodes, iset)
    n_rows = e.shape[0]
    if m_cols <= n_rows:
        raise DomainError("index set must have more frequencies than nodes")
    work = e.copy()
    row_norms = np.linalg.norm(work, axis=1)
    pivots: list[tuple[int, int]] = []
    pivot_cols: set[int] = set()
    for r in range(n_rows):
        candidates = [j for j in range(m_cols) if j not in pivot_cols]
        mags = np.abs(work[r, candidates])
        best = int(np.argmax(mags))
        if mags[best] <= _PIVOT_THRESHOLD * max(row_norms[r], 1.0):
            continue  # dependent row
        col = candidates[best]
        pivots.append((r, col))
        pivot_cols.add(col)
        factors = work[r + 1 :, col] / work[r, col]
        work[r + 1 :] -= np.outer(factors, work[r])
        work[r + 1 :, col] = 0.0
    free_cols = [j for j in range(m_cols) if j not in pivot_cols]
    c = np.zeros(m_cols, dtype=np.complex128)
    c[free_cols[0]] = 1.0
    for r, col in reversed(pivots):
        c[col] = -(work[r] @ c) / work[r, col]
    return c


def weight_sum_at(iset: FoolingIndexSet, pivot: Frequency) -> float:
    """sum over k in A of max(1, min_{j in supp(k)} log|k_j - pivot_j|)."""
    dense = pivot.entries()
    terms: list[float] = []
    for k in iset.frequencies:
        if k.is_zero:
            terms.append(1.0)
            continue
        best = math.inf
        for idx, v in k.terms:
            diff = abs(v - dense[idx])
            best = min(best, math.log(diff) if diff > 0 else -math.inf)
        terms.append(max(1.0, best))
    return math.fsum(terms)


def counting_sum_max(iset: FoolingIndexSet) -> float:
    """max over pivots in A of weight_sum_at; its reciprocal is the fooled
    integral, and for n > 2d it is at most 2 n^2 / d."""
    return max(weight_sum_at(iset, l) for l in iset.frequencies)


@dataclass(frozen=True)
class FoolingCertificate:
    index_set: FoolingIndexSet
    coeffs: tuple[complex, ...]
    pivot: Frequency
    pivot_position: int
    constant: float
    g_star: SpectralFunction
    residual_max: float
    norm_f1: float
    qmc_value: complex
    n: int
    d: int
    guaranteed_bound: bool


def _evaluate_at_node(f: SpectralFunction, node) -> complex:
    if isinstance(node, RationalPoint):
        return evaluate(f, node)
    return evaluate_at_floats(f, node)


def _nodes_of(alg: LinearAlgorithm):
    return alg.rational_nodes if alg.rational_nodes is not None else alg.float_nodes


def fooling_certificate(alg: LinearAlgorithm, d: int) -> FoolingCertificate:
    """Construct g* for the given algorithm's nodes.

    The certificate depends only on the nodes; weights enter the reported
    algorithm output Q(g*) but cannot change g*.  For n <= 2d the function is
    still built, but the d/(2 n^2) floor is flagged as not guaranteed.
    """
    if alg.d != d:
        raise DomainError(f"algorithm dimension {alg.d} != requested d={d}")
    n = alg.n
    iset = build_index_set(n, d)
    nodes = _nodes_of(alg)
    c = nullspace_vector(nodes, iset)
    pos = int(np.argmax(np.abs(c)))
    pivot = iset.frequencies[pos]
    c = c / c[pos]
    c[pos] = 1.0  # pin exactly; division is already within one ulp
    constant = 1.0 / counting_sum_max(iset)

    shifted: dict[Frequency, complex] = {}
    for k, ck in zip(iset.frequencies, c):
        if ck == 0:
            continue
        q = k - pivot
        shifted[q] = shifted.get(q, 0j) + constant * complex(ck)
    star: dict[Frequency, complex] = {}
    for q, a in shifted.items():
        star[q] = star.get(q, 0j) + a / 2
        mq = -q
        star[mq] = star.get(mq, 0j) + a.conjugate() / 2
    g_star = SpectralFunction(d=d, coeffs=star, real_valued=True)

    values = np.asarray([_evaluate_at_node(g_star, nd) for nd in nodes])
    residual_max = float(np.abs(values).max())
    qmc_value = complex((alg.weights * values).sum())
    return FoolingCertificate(
        index_set=iset,
        coeffs=tuple(complex(v) for v in c),
        pivot=pivot,
        pivot_position=pos,
        constant=constant,
        g_star=g_star,
        residual_max=residual_max,
        norm_f1=norm(g_star, WeightScheme.F1),
        qmc_value=qmc_value,
        n=n,
        d=d,
        guaranteed_bound=n > 2 * d,
    )


@dataclass(frozen=True)
class CertificateCheck:
    """Named re-checks of a fooling certificate, one report per assertion."""

    reports: Mapping[str, BoundReport]

    @property
    def all_satisfied(self) -> bool:
        return all(r.satisfied for r in self.reports.values())

    @property
    def failures(self) -> tuple[str, ...]:
        return tuple(name for name, r in self.reports.items() if not r.satisfied)


def verify_certificate(
    cert: FoolingCertificate,
    alg: LinearAlgorithm,
    *,
    residual_tol: float = _RESIDUAL_TOL,
    norm_tol: float = _NORM_TOL,
    bound_tol: float = _BOUND_TOL,
) -> CertificateCheck:
    """Independent re-check: vanishing at the nodes, zero algorithm output,
    unit norm, integral equal to the constant, and (when n > 2d) the
    d/(2 n^2) floor."""
    nodes = _nodes_of(alg)
    values = np.asarray([_evaluate_at_node(cert.g_star, nd) for nd in nodes])
    reports = {
        "residual": BoundReport.compare(float(np.abs(values).max()), residual_tol),
        "qmc_value": BoundReport.compare(
            abs(complex((alg.weights * values).sum())),
            residual_tol * max(1.0, float(np.abs(alg.weights).sum())),
        ),
        "norm_f1": BoundReport.compare(norm(cert.g_star, WeightScheme.F1), 1.0 + norm_tol),
        "integral": BoundReport.compare(
            abs(integral(cert.g_star) - cert.constant), bound_tol
        ),
    }
    if cert.n > 2 * cert.d:
        reports["lower_bound"] = BoundReport.compare(
            cert.d / (2.0 * cert.n**2) - cert.constant, bound_tol
        )
    return CertificateCheck(reports=reports)


# ---------------------------------------------------------------------------
# JSON round-trip for certificates (used by the CLI).
# ---------------------------------------------------------------------------


def certificate_to_json(cert: FoolingCertificate) -> dict:
    from .fourier import to_json_dict

    return {
        "d": cert.d,
        "n": cert.n,
        "pivot_position": cert.pivot_position,
        "pivot": [[i, v] for i, v in cert.pivot.terms],
        "C": cert.constant,
        "coeffs": [[z.real, z.imag] for z in cert.coeffs],
        "residual_max": cert.residual_max,
        "norm_f1": cert.norm_f1,
        "qmc_re": cert.qmc_value.real,
        "qmc_im": cert.qmc_value.imag,
        "guaranteed_bound": cert.guaranteed_bound,
        "g_star": to_json_dict(cert.g_star),
    }


def certificate_from_json(obj: dict) -> FoolingCertificate:
    from .fourier import from_json_dict

    try:
        d = int(obj["d"])
        n = int(obj["n"])
        iset = build_index_set(n, d)
        coeffs = tuple(complex(re, im) for re, im in obj["coeffs"])
        if len(coeffs) != len(iset):
            raise DataError("coefficient count does not match the index set")
        pos = int(obj["pivot_position"])
        return FoolingCertificate(
            index_set=iset,
            coeffs=coeffs,
            pivot=iset.frequencies[pos],
            pivot_position=pos,
            constant=float(obj["C"]),
            g_star=from_json_dict(obj["g_star"]),
            residual_max=float(obj["residual_max"]),
            norm_f1=float(obj["norm_f1"]),
            qmc_value=complex(float(obj["qmc_re"]), float(obj["qmc_im"])),
            n=n,
            d=d,
            guaranteed_bound=bool(obj["guaranteed_bound"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"malformed certificate document: {exc}") from exc
