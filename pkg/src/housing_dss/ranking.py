"""Ranked lists with competition ties, cross-method comparison, and allocation.

Competition ranking: equal scores share a rank and the next distinct score
jumps (1, 2, 2, 4). Rank similarity between two methods is the proportion
of students holding exactly the same rank in both. Rankings from several
methods can be merged by average rank, and housing units are filled from
the top of a chosen ranking.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from .errors import DomainError
from .methods import FlowTable, Method, ScoreVector

TIE_POLICY_COMPETITION = "COMPETITION"


@dataclass(frozen=True)
class RankEntry:
    student_id: str
    score: float
    rank: int


@dataclass(frozen=True)
class RankingResult:
    method: Method
    entries: tuple[RankEntry, ...]
    tie_policy: str = TIE_POLICY_COMPETITION
    cohort_key: tuple[str, str] | None = None
    weights: Mapping[str, float] | None = None

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def student_ids(self) -> frozenset[str]:
        return frozenset(e.student_id for e in self.entries)

    def rank_of(self, student_id: str) -> int:
        for entry in self.entries:
            if entry.student_id == student_id:
                return entry.rank
        raise DomainError(f"unknown student_id {student_id!r} in ranking")

    def ranks(self) -> dict[str, int]:
        return {e.student_id: e.rank for e in self.entries}


@dataclass(frozen=True)
class SimilarityReport:
    methods: tuple[Method, Method]
    n: int
    matches: int
    percent: float


@dataclass(frozen=True)
class AllocationResult:
    capacity: int
    allocated: tuple[str, ...]
    waitlist: tuple[str, ...]
    basis: RankingResult


def _competition_entries(
    ids: Sequence[str], scores: Sequence[float], *, descending: bool
) -> tuple[RankEntry, ...]:
    # rank = 1 + number of strictly better scores; tied students listed by id
    sign = -1.0 if descending else 1.0
    order = sorted(range(len(ids)), key=lambda i: (sign * scores[i], ids[i]))
    entries = []
    for i in order:
        if descending:
            better = sum(1 for s in scores if s > scores[i])
        else:
            better = sum(1 for s in scores if s < scores[i])
        entries.append(RankEntry(student_id=ids[i], score=float(scores[i]), rank=1 + better))
    return tuple(entries)


def assign_ranks(
    scores: ScoreVector | FlowTable,
    *,
    cohort_key: tuple[str, str] | None = None,
    weights: Mapping[str, float] | None = None,
) -> RankingResult:
    """Rank alternatives by descending score (net flow for PROMETHEE)."""
    if isinstance(scores, FlowTable):
        scores = scores.net_scores()
    if len(scores.labels) == 0:
        raise DomainError("cannot rank an empty score vector")
    entries = _competition_entries(scores.labels, list(scores.values), descending=True)
    return RankingResult(
        method=scores.method,
        entries=entries,
        cohort_key=cohort_key,
        weights=dict(weights) if weights is not None else None,
    )


def rank_similarity(r1: RankingResult, r2: RankingResult) -> SimilarityReport:
    """Share of students with the identical rank in both rankings, as a percentage."""
    if r1.student_ids != r2.student_ids:
        raise DomainError("rankings cover different student sets")
    ranks1, ranks2 = r1.ranks(), r2.ranks()
    matches = sum(1 for sid in ranks1 if ranks1[sid] == ranks2[sid])
    n = r1.n
    return SimilarityReport(
        methods=(r1.method, r2.method), n=n, matches=matches, percent=100.0 * matches / n
    )


def aggregate_ranks(rankings: Sequence[RankingResult]) -> RankingResult:
    """Merge rankings by average rank (lower is better), re-ranked with ties."""
    if len(rankings) < 2:
        raise DomainError("aggregation needs at least 2 rankings")
    base_ids = rankings[0].student_ids
    for other in rankings[1:]:
        if other.student_ids != base_ids:
            raise DomainError("rankings cover different student sets")
    ids = sorted(base_ids)
    mean_ranks = [
        sum(r.ranks()[sid] for r in rankings) / len(rankings) for sid in ids
    ]
    entries = _competition_entries(ids, mean_ranks, descending=False)
    keys = {r.cohort_key for r in rankings}
    return RankingResult(
        method=Method.AVERAGE_RANK,
        entries=entries,
        cohort_key=keys.pop() if len(keys) == 1 else None,
    )


def allocate(
    r: RankingResult,
    capacity: int,
    tie_breaker: Callable[[Sequence[str]], Sequence[str]] | None = None,
) -> AllocationResult:
    """Fill units from the top of the ranking.

    A tie class straddling the cutoff is ordered by ``tie_breaker``
    (ascending student id when none is given, so allocation is
    reproducible); whoever does not fit heads the waitlist.
    """
    if capacity < 0:
        raise DomainError(f"capacity must be >= 0, got {capacity}")
    allocated: list[str] = []
    waitlist: list[str] = []
    by_rank: dict[int, list[str]] = {}
    for entry in r.entries:
        by_rank.setdefault(entry.rank, []).append(entry.student_id)
    for rank in sorted(by_rank):
        tie_class = by_rank[rank]
        room = capacity - len(allocated)
        if room <= 0:
            waitlist.extend(tie_class)
        elif len(tie_class) <= room:
            allocated.extend(tie_class)
        else:
            ordered = list(tie_breaker(tie_class)) if tie_breaker else sorted(tie_class)
            if sorted(ordered) != sorted(tie_class):
                raise DomainError("tie breaker must permute the tie class")
            allocated.extend(ordered[:room])
            waitlist.extend(ordered[room:])
    return AllocationResult(
        capacity=capacity, allocated=tuple(allocated), waitlist=tuple(waitlist), basis=r
    )
