"""Pairwise comparison matrices: priority derivation and consistency checking.

Weights come from the principal right eigenvector (power iteration) or from
row geometric means; both reproduce each other exactly on perfectly
consistent matrices. Consistency is judged by the classic ratio test:
CR = CI / RI with CI = (lambda_max - n) / (n - 1), acceptable when
CR <= 0.1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError, NumericError

# Random index by matrix order (Saaty's table); orders above 10 reuse the
# last entry.
RANDOM_INDEX = {1: 0.0, 2: 0.0, 3: 0.58, 4: 0.90, 5: 1.12,
                6: 1.24, 7: 1.32, 8: 1.41, 9: 1.45, 10: 1.49}

CR_THRESHOLD = 0.1

POWER_ITERATION_TOL = 1e-10
POWER_ITERATION_MAX = 10_000

_RECIPROCAL_TOL = 1e-9


class PriorityAlgorithm(Enum):
    EIGENVECTOR = "eigenvector"
    GEOMETRIC_MEAN = "geometric_mean"


def saaty_scale_check(value: float) -> bool:
    """True iff value is an integer 1..9 or the reciprocal of one (within 1e-9)."""
    if not isinstance(value, (int, float)) or not math.isfinite(value):
        return False
    for k in range(1, 10):
        if abs(value - k) <= 1e-9 or abs(value - 1.0 / k) <= 1e-9:
            return True
    return False


@dataclass(frozen=True)
class PairwiseMatrix:
    """Positive reciprocal comparison matrix over labeled items.

    Reciprocity (a_ij * a_ji = 1) is enforced at construction;
    ``reciprocal_tol`` may be widened for matrices transcribed from rounded
    published tables (elicited matrices always use the strict default).
    """

    labels: tuple[str, ...]
    entries: np.ndarray
    reciprocal_tol: float = _RECIPROCAL_TOL

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=float)
        n = len(self.labels)
        if len(set(self.labels)) != n:
            raise DomainError("duplicate labels in pairwise matrix")
        if entries.shape != (n, n):
            raise DomainError(f"expected {n}x{n} matrix, got shape {entries.shape}")
        if not np.all(np.isfinite(entries)) or np.any(entries <= 0):
            raise DomainError("pairwise entries must be positive and finite")
        if np.any(np.diag(entries) != 1.0):
            raise DomainError("pairwise diagonal must be exactly 1")
        residual = np.abs(entries * entries.T - 1.0)
        if np.max(residual) > self.reciprocal_tol:
            i, j = np.unravel_index(np.argmax(residual), residual.shape)
            raise DomainError(
                f"entries ({self.labels[i]},{self.labels[j]}) break reciprocity: "
                f"{entries[i, j]} * {entries[j, i]} != 1"
            )
        entries = entries.copy()
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def n(self) -> int:
        return len(self.labels)

    @classmethod
    def from_rows(cls, labels, rows, reciprocal_tol: float = _RECIPROCAL_TOL) -> "PairwiseMatrix":
        return cls(labels=tuple(labels), entries=np.asarray(rows, dtype=float),
                   reciprocal_tol=reciprocal_tol)

    @classmethod
    def from_upper_triangle(cls, labels, judgments: dict[tuple[str, str], float]) -> "PairwiseMatrix":
        """Build a full matrix from upper-triangle judgments; reciprocals are derived.

        Expects exactly one judgment per unordered label pair, keyed in either
        orientation.
        """
        labels = tuple(labels)
        index = {label: i for i, label in enumerate(labels)}
        n = len(labels)
        entries = np.eye(n)
        seen = set()
        for (first, second), value in judgments.items():
            if first not in index or second not in index:
                unknown = first if first not in index else second
                raise DomainError(f"unknown label {unknown!r} in judgments")
            if first == second:
                raise DomainError(f"self-comparison {first!r} is fixed at 1")
            i, j = index[first], index[second]
            if frozenset((i, j)) in seen:
                raise DomainError(f"duplicate judgment for pair ({first}, {second})")
            seen.add(frozenset((i, j)))
            value = float(value)
            if not math.isfinite(value) or value <= 0:
                raise DomainError(f"judgment ({first}, {second}) must be positive, got {value!r}")
            entries[i, j] = value
            entries[j, i] = 1.0 / value
        missing = n * (n - 1) // 2 - len(seen)
        if missing:
            raise DomainError(f"incomplete judgments: {missing} pair(s) missing")
        return cls(labels=labels, entries=entries)


@dataclass(frozen=True)
class WeightVector:
    """Per-criterion priorities; always sums to 1."""

    labels: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (len(self.labels),):
            raise DomainError("weight vector length does not match labels")
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise DomainError("weights must be non-negative and finite")
        if abs(values.sum() - 1.0) > 1e-9:
            raise DomainError(f"weights must sum to 1, got {values.sum()!r}")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_raw(cls, labels, raw) -> "WeightVector":
        """Normalize arbitrary non-negative weights so they sum to 1."""
        raw = np.asarray(raw, dtype=float)
        if not np.all(np.isfinite(raw)) or np.any(raw < 0):
            raise DomainError("raw weights must be non-negative and finite")
        total = raw.sum()
        if total <= 0:
            raise DomainError("raw weights must have a positive sum")
        return cls(labels=tuple(labels), values=raw / total)

    def as_dict(self) -> dict[str, float]:
        return {label: float(v) for label, v in zip(self.labels, self.values)}

    def __getitem__(self, label: str) -> float:
        try:
            return float(self.values[self.labels.index(label)])
        except ValueError:
            raise DomainError(f"unknown label {label!r}") from None


@dataclass(frozen=True)
class ConsistencyReport:
    lambda_max: float
    ci: float
    cr: float
    ri: float
    n: int
    consistent: bool

    def as_dict(self) -> dict:
        return {
            "lambda_max": self.lambda_max,
            "ci": self.ci,
            "cr": self.cr,
            "ri": self.ri,
            "n": self.n,
            "consistent": self.consistent,
        }


def priority_vector(
    m: PairwiseMatrix,
    algorithm: PriorityAlgorithm = PriorityAlgorithm.EIGENVECTOR,
) -> WeightVector:
    """Derive the priority (weight) vector of a pairwise matrix.

    EIGENVECTOR runs power iteration to the principal right eigenvector
    (tolerance 1e-10, at most 10_000 iterations); GEOMETRIC_MEAN normalizes
    the row geometric means. Both agree within 1e-9 on consistent matrices.
    """
    if m.n < 2:
        raise DomainError("priority vector needs at least a 2x2 matrix")
    if algorithm is PriorityAlgorithm.GEOMETRIC_MEAN:
        means = np.exp(np.mean(np.log(m.entries), axis=1))
        return WeightVector(labels=m.labels, values=means / means.sum())

    w = np.full(m.n, 1.0 / m.n)
    for iteration in range(1, POWER_ITERATION_MAX + 1):
        nxt = m.entries @ w
        nxt /= nxt.sum()
        if np.max(np.abs(nxt - w)) < POWER_ITERATION_TOL:
            return WeightVector(labels=m.labels, values=nxt)
        w = nxt
    raise NumericError(
        f"power iteration did not converge in {POWER_ITERATION_MAX} iterations",
        iterations=POWER_ITERATION_MAX,
    )


def consistency(m: PairwiseMatrix, w: WeightVector) -> ConsistencyReport:
    """Consistency report for a matrix under a weight vector.

    lambda_max is the row-wise mean of (M w)_i / w_i, which is invariant
    under rescaling of w. CI = (lambda_max - n)/(n - 1); CR = CI / RI(n),
    defined as 0 where RI is 0 (n <= 2).
    """
    if m.labels != w.labels:
        raise DomainError(f"weight labels {w.labels} do not match matrix labels {m.labels}")
    if m.n < 2:
        raise DomainError("consistency needs at least a 2x2 matrix")
    weights = w.values
    if np.any(weights == 0):
        zero = m.labels[int(np.argmin(weights))]
        raise NumericError(f"weight for {zero!r} is 0; consistency ratios are undefined")
    lambda_max = float(np.mean((m.entries @ weights) / weights))
    ci = (lambda_max - m.n) / (m.n - 1)
    ri = RANDOM_INDEX.get(m.n, RANDOM_INDEX[max(RANDOM_INDEX)])
    cr = ci / ri if ri > 0 else 0.0
    return ConsistencyReport(
        lambda_max=lambda_max, ci=ci, cr=cr, ri=ri, n=m.n, consistent=cr <= CR_THRESHOLD
    )
