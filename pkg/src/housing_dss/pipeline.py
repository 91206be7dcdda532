"""End-to-end orchestration: screen, weigh, rank, compare, allocate.

The two-stage procedure in one call: stage 1 screens the cohort against the
basic criteria; stage 2 normalizes the survivors, derives criterion weights
from the configured pairwise judgments, ranks with all three methods,
compares the rankings, and (when a capacity is configured) allocates
housing units from the aggregate ranking.
"""

from __future__ import annotations

from dataclasses import replace
from datetime import datetime, timezone

from .domain import Cohort, DecisionMatrix, build_decision_matrix
from .eligibility import screen_cohort
from .errors import ConfigError, InconsistentJudgmentsError
from .methods import Method, ahp_scores, promethee_rank, wsm_scores
from .pairwise import (
    CR_THRESHOLD,
    ConsistencyReport,
    PairwiseMatrix,
    PriorityAlgorithm,
    WeightVector,
    consistency,
    priority_vector,
)
from .persistence import AppConfig, ResultBundle
from .ranking import RankingResult, aggregate_ranks, allocate, assign_ranks, rank_similarity

RANKING_METHODS = (Method.AHP, Method.WSM, Method.PROMETHEE)


def utc_now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def derive_weights(
    judgments: PairwiseMatrix, algorithm: PriorityAlgorithm = PriorityAlgorithm.EIGENVECTOR
) -> tuple[WeightVector, ConsistencyReport]:
    """Priority vector plus its consistency report, in one step."""
    weights = priority_vector(judgments, algorithm)
    return weights, consistency(judgments, weights)


def _aligned_weights(weights: WeightVector, cols: tuple[str, ...]) -> WeightVector:
    """Reorder a weight vector onto the matrix's column order."""
    if set(weights.labels) != set(cols):
        raise ConfigError(
            f"judgment labels {sorted(weights.labels)} do not cover "
            f"the criteria {sorted(cols)}"
        )
    if weights.labels == tuple(cols):
        return weights
    return WeightVector(labels=tuple(cols), values=[weights[c] for c in cols])


def rank_one(
    matrix: DecisionMatrix,
    weights: WeightVector,
    method: Method,
    config: AppConfig,
    cohort_key: tuple[str, str] | None = None,
) -> RankingResult:
    """Run a single ranking method over a normalized matrix."""
    weights = _aligned_weights(weights, matrix.cols)
    if method is Method.AHP:
        scores = ahp_scores(matrix, weights)
    elif method is Method.WSM:
        scores = wsm_scores(matrix, weights)
    elif method is Method.PROMETHEE:
        scores = promethee_rank(
            matrix, weights, preference=config.preference_functions(matrix.cols)
        )
    else:
        raise ConfigError(f"{method.value} is an aggregate, not a ranking method")
    return assign_ranks(scores, cohort_key=cohort_key, weights=weights.as_dict())


def run_pipeline(
    cohort: Cohort,
    config: AppConfig,
    *,
    generated_at: str | None = None,
    force: bool = False,
) -> ResultBundle:
    """Run both stages for one cohort and bundle everything up.

    Raises InconsistentJudgmentsError when the configured judgments exceed
    CR 0.1, unless ``force`` is set (the bundle then records forced=True).
    """
    if config.judgments is None:
        raise ConfigError("config has no judgments section; cannot derive weights")

    cohort = replace(cohort, criteria_set=config.criteria())
    screening = screen_cohort(cohort, config.rules)

    weights, report = derive_weights(config.judgments, config.priority_algorithm)
    if not report.consistent and not force:
        raise InconsistentJudgmentsError(
            f"judgments are inconsistent (CR {report.cr:.4f} > {CR_THRESHOLD}); "
            "revise them or force the run",
            cr=report.cr,
        )

    generated_at = generated_at or utc_now()
    base = dict(
        cohort_key=cohort.key,
        generated_at=generated_at,
        config_hash=config.hash,
        screening=screening,
        weights=weights,
        consistency=report,
        algorithm=config.priority_algorithm,
        forced=not report.consistent,
    )

    if not screening.eligible_ids:
        return ResultBundle(
            matrix=None, rankings={}, similarity=(), allocation=None, **base
        )

    matrix = build_decision_matrix(cohort, screening.eligible_ids)
    rankings = {
        method: rank_one(matrix, weights, method, config, cohort_key=cohort.key)
        for method in RANKING_METHODS
    }
    similarity = tuple(
        rank_similarity(rankings[a], rankings[b])
        for a, b in (
            (Method.AHP, Method.WSM),
            (Method.AHP, Method.PROMETHEE),
            (Method.WSM, Method.PROMETHEE),
        )
    )
    rankings[Method.AVERAGE_RANK] = aggregate_ranks(
        [rankings[m] for m in RANKING_METHODS]
    )

    capacity = config.capacity_for(cohort.key)
    allocation = None
    if capacity is not None:
        allocation = allocate(rankings[config.allocation_basis], capacity)

    return ResultBundle(
        matrix=matrix,
        rankings=rankings,
        similarity=similarity,
        allocation=allocation,
        **base,
    )
