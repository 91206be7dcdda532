"""The three ranking methods over a normalized decision matrix.

AHP scores alternatives in distributive mode (each criterion column
normalized to sum 1, then weighted); WSM is the plain weighted sum;
PROMETHEE II ranks by net outranking flow. All three consume the same
scale-10 matrix and the same weight vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Mapping

import numpy as np

from .domain import DecisionMatrix, Scale
from .errors import DomainError
from .pairwise import WeightVector


class Method(Enum):
    AHP = "ahp"
    WSM = "wsm"
    PROMETHEE = "promethee"
    AVERAGE_RANK = "average_rank"


class PreferenceShape(Enum):
    USUAL = "usual"            # step: any positive difference is full preference
    LINEAR_P = "linear_p"      # ramps 0..1 over (0, p]
    LINEAR_QP = "linear_qp"    # indifferent up to q, ramps over (q, p]


@dataclass(frozen=True)
class PreferenceFunction:
    """Maps a value difference d to a preference degree in [0, 1]; 0 for d <= 0."""

    shape: PreferenceShape = PreferenceShape.USUAL
    q: float = 0.0
    p: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.q) and self.q >= 0):
            raise DomainError(f"indifference threshold q must be >= 0, got {self.q!r}")
        if not (math.isfinite(self.p) and self.p >= self.q):
            raise DomainError(f"preference threshold p must be >= q, got p={self.p!r} q={self.q!r}")
        if self.shape is PreferenceShape.LINEAR_P and self.p <= 0:
            raise DomainError("LINEAR_P needs a positive preference threshold p")

    def __call__(self, d: np.ndarray | float) -> np.ndarray | float:
        d = np.asarray(d, dtype=float)
        if self.shape is PreferenceShape.USUAL:
            out = (d > 0).astype(float)
        elif self.shape is PreferenceShape.LINEAR_P:
            out = np.clip(d / self.p, 0.0, 1.0)
            out = np.where(d <= 0, 0.0, out)
        else:  # LINEAR_QP
            if self.p > self.q:
                ramp = np.clip((d - self.q) / (self.p - self.q), 0.0, 1.0)
            else:  # degenerate p == q: step at the threshold
                ramp = (d > self.q).astype(float)
            out = np.where(d <= self.q, 0.0, ramp)
            out = np.where(d <= 0, 0.0, out)
        return out if out.ndim else float(out)


USUAL = PreferenceFunction(PreferenceShape.USUAL)


@dataclass(frozen=True)
class ScoreVector:
    """Per-alternative scalar scores from one method."""

    labels: tuple[str, ...]
    values: np.ndarray
    method: Method

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (len(self.labels),):
            raise DomainError("score vector length does not match labels")
        if not np.all(np.isfinite(values)):
            raise DomainError("scores must be finite")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def as_dict(self) -> dict[str, float]:
        return {label: float(v) for label, v in zip(self.labels, self.values)}


@dataclass(frozen=True)
class FlowTable:
    """PROMETHEE outranking flows plus the pairwise preference-index matrix."""

    labels: tuple[str, ...]
    preference_index: np.ndarray  # pi[a, b], zero diagonal
    phi_plus: np.ndarray
    phi_minus: np.ndarray
    phi_net: np.ndarray

    def __post_init__(self):
        for name in ("preference_index", "phi_plus", "phi_minus", "phi_net"):
            arr = np.asarray(getattr(self, name), dtype=float).copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def net_scores(self) -> ScoreVector:
        return ScoreVector(labels=self.labels, values=self.phi_net, method=Method.PROMETHEE)


def _require_scale10(dm: DecisionMatrix) -> None:
    if dm.scale is not Scale.SCALE10:
        raise DomainError("ranking methods operate on the normalized (scale-10) matrix")


def _require_matching_weights(dm: DecisionMatrix, w: WeightVector) -> None:
    if tuple(w.labels) != tuple(dm.cols):
        raise DomainError(
            f"weight labels {w.labels} do not match matrix columns {dm.cols}"
        )


def ahp_alternative_priorities(dm: DecisionMatrix, criterion_id: str) -> np.ndarray:
    """Distributive-mode priorities for one criterion column (sums to 1).

    Equivalent to the principal eigenvector of the score-ratio matrix
    r_ij = s_i / s_j when all scores are positive; an all-zero column
    yields the uniform vector.
    """
    col = dm.column(criterion_id)
    total = col.sum()
    if total == 0:
        return np.full(len(col), 1.0 / len(col))
    return col / total


def ahp_scores(dm: DecisionMatrix, w: WeightVector) -> ScoreVector:
    """Weighted sum of per-criterion distributive priorities; scores sum to 1."""
    _require_scale10(dm)
    _require_matching_weights(dm, w)
    scores = np.zeros(len(dm.rows))
    for j, criterion_id in enumerate(dm.cols):
        scores += w.values[j] * ahp_alternative_priorities(dm, criterion_id)
    return ScoreVector(labels=dm.rows, values=scores, method=Method.AHP)


def wsm_scores(dm: DecisionMatrix, w: WeightVector) -> ScoreVector:
    """Weighted sum of the normalized values; each score lies in [0, 10]."""
    _require_scale10(dm)
    _require_matching_weights(dm, w)
    return ScoreVector(labels=dm.rows, values=dm.values @ w.values, method=Method.WSM)


def promethee_rank(
    dm: DecisionMatrix,
    w: WeightVector,
    preference: PreferenceFunction | Mapping[str, PreferenceFunction] = USUAL,
) -> FlowTable:
    """PROMETHEE II flows for the matrix rows.

    pi(a, b) = sum_j w_j * P_j(value_a_j - value_b_j); the outflow and
    inflow average pi over the other n-1 alternatives; the net flow is
    their difference. Needs at least two alternatives.
    """
    _require_scale10(dm)
    _require_matching_weights(dm, w)
    n = len(dm.rows)
    if n < 2:
        raise DomainError("PROMETHEE needs at least 2 alternatives")

    if isinstance(preference, PreferenceFunction):
        functions = {c: preference for c in dm.cols}
    else:
        missing = set(dm.cols) - set(preference)
        if missing:
            raise DomainError(f"no preference function for criteria {sorted(missing)}")
        functions = dict(preference)

    pi = np.zeros((n, n))
    for j, criterion_id in enumerate(dm.cols):
        col = dm.values[:, j]
        diffs = col[:, None] - col[None, :]
        pi += w.values[j] * functions[criterion_id](diffs)
    np.fill_diagonal(pi, 0.0)

    phi_plus = pi.sum(axis=1) / (n - 1)
    phi_minus = pi.sum(axis=0) / (n - 1)
    return FlowTable(
        labels=dm.rows,
        preference_index=pi,
        phi_plus=phi_plus,
        phi_minus=phi_minus,
        phi_net=phi_plus - phi_minus,
    )
