"""HTTP service: cohorts, judgment-elicitation sessions, ranking, allocation.

Thin JSON layer over the engine. The service holds an in-memory store;
cohort and session ids are issued sequentially (c1, c2, ... / s1, s2, ...)
so replaying the same request sequence against a fresh store reproduces
identical responses. Mutations are serialized behind a lock; reads see
complete state only.

Error model: 400 malformed body, 404 unknown id, 409 operation out of
order (rank before screen, incomplete/inconsistent judgments), 422 domain
violations with the offending field named.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Any, Callable

from fastapi import FastAPI, HTTPException, Query, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict

from .domain import Cohort, DecisionMatrix, build_decision_matrix
from .eligibility import ScreeningResult, screen_cohort
from .errors import DomainError, HousingDssError, ParseError, UnknownIdError
from .methods import Method
from .pairwise import (
    ConsistencyReport,
    PairwiseMatrix,
    WeightVector,
    consistency,
    priority_vector,
    saaty_scale_check,
)
from .persistence import (
    AppConfig,
    ResultBundle,
    default_config,
    record_to_application,
    save_results,
)
from .pipeline import RANKING_METHODS, rank_one, utc_now
from .ranking import AllocationResult, RankingResult, aggregate_ranks, allocate, rank_similarity


STATUS_INCOMPLETE = "INCOMPLETE"
STATUS_CONSISTENT = "CONSISTENT"
STATUS_INCONSISTENT = "INCONSISTENT"


# ---------------------------------------------------------------------------
# request bodies


class CohortBody(BaseModel):
    model_config = ConfigDict(extra="forbid")
    applications: list[dict[str, Any]]


class SessionBody(BaseModel):
    model_config = ConfigDict(extra="forbid")
    criteria: list[str] | None = None


class JudgmentBody(BaseModel):
    model_config = ConfigDict(extra="forbid")
    first: str
    second: str
    value: float | None = None


class RankBody(BaseModel):
    model_config = ConfigDict(extra="forbid")
    session_id: str | None = None
    weights: dict[str, float] | None = None
    force: bool = False


class AllocateBody(BaseModel):
    model_config = ConfigDict(extra="forbid")
    capacity: int
    basis: str = Method.AVERAGE_RANK.value


# ---------------------------------------------------------------------------
# server-side state


@dataclass
class Session:
    """One pairwise-judgment elicitation in progress."""

    id: str
    labels: tuple[str, ...]
    cells: dict[tuple[str, str], float] = field(default_factory=dict)

    @property
    def total_pairs(self) -> int:
        n = len(self.labels)
        return n * (n - 1) // 2

    @property
    def entered_pairs(self) -> int:
        return len(self.cells) // 2

    def matrix(self) -> PairwiseMatrix | None:
        if self.entered_pairs < self.total_pairs:
            return None
        triangle = {
            (a, b): v for (a, b), v in self.cells.items()
            if self.labels.index(a) < self.labels.index(b)
        }
        return PairwiseMatrix.from_upper_triangle(self.labels, triangle)


class Store:
    """In-memory state with serialized mutations and snapshot reads."""

    def __init__(self):
        self.lock = threading.RLock()
        self._counters = {"c": 0, "s": 0}
        self.cohorts: dict[str, Cohort] = {}
        self.screenings: dict[str, ScreeningResult] = {}
        self.matrices: dict[str, DecisionMatrix] = {}
        self.rankings: dict[str, dict[Method, RankingResult]] = {}
        self.weights: dict[str, WeightVector] = {}
        self.consistency: dict[str, ConsistencyReport | None] = {}
        self.forced: dict[str, bool] = {}
        self.allocations: dict[str, AllocationResult] = {}
        self.sessions: dict[str, Session] = {}

    def next_id(self, prefix: str) -> str:
        self._counters[prefix] += 1
        return f"{prefix}{self._counters[prefix]}"


def _fail(status: int, message: str, field_name: str | None = None):
    raise HTTPException(status, detail={"message": message, "field": field_name})


def _from_error(exc: HousingDssError):
    if isinstance(exc, UnknownIdError):
        _fail(404, str(exc))
    if isinstance(exc, ParseError):
        _fail(400, str(exc), exc.field)
    field_name = getattr(exc, "field", None)
    _fail(422, str(exc), field_name)


# ---------------------------------------------------------------------------
# app factory


def create_app(
    config: AppConfig | None = None,
    clock: Callable[[], str] | None = None,
) -> FastAPI:
    """Build the service around one configuration and one store.

    ``clock`` supplies the timestamp stamped into result bundles; inject a
    fixed one to make whole request sequences reproducible byte-for-byte.
    """
    config = config or default_config()
    clock = clock or utc_now
    store = Store()
    app = FastAPI(title="housing-dss", version="0.1.0")

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request: Request, exc: RequestValidationError):
        errors = [
            {
                "loc": [str(part) for part in e.get("loc", ())],
                "message": e.get("msg", ""),
                "type": e.get("type", ""),
            }
            for e in exc.errors()
        ]
        return JSONResponse(
            status_code=400,
            content={"detail": {"message": "malformed request", "errors": errors}},
        )

    @app.exception_handler(HousingDssError)
    async def engine_error(request: Request, exc: HousingDssError):
        try:
            _from_error(exc)
        except HTTPException as http:
            return JSONResponse(status_code=http.status_code, content={"detail": http.detail})

    # -- helpers ------------------------------------------------------------

    def get_cohort(cohort_id: str) -> Cohort:
        try:
            return store.cohorts[cohort_id]
        except KeyError:
            _fail(404, f"unknown cohort {cohort_id!r}")

    def get_session(session_id: str) -> Session:
        try:
            return store.sessions[session_id]
        except KeyError:
            _fail(404, f"unknown session {session_id!r}")

    def session_view(session: Session) -> dict:
        judgments = {f"{a}:{b}": v for (a, b), v in sorted(session.cells.items())}
        view = {
            "id": session.id,
            "criteria": list(session.labels),
            "entered_pairs": session.entered_pairs,
            "total_pairs": session.total_pairs,
            "judgments": judgments,
            "status": STATUS_INCOMPLETE,
            "consistency": None,
            "weights": None,
        }
        matrix = session.matrix()
        if matrix is not None:
            weights = priority_vector(matrix, config.priority_algorithm)
            report = consistency(matrix, weights)
            view["status"] = STATUS_CONSISTENT if report.consistent else STATUS_INCONSISTENT
            view["consistency"] = report.as_dict()
            view["weights"] = weights.as_dict()
        return view

    def ranking_view(r: RankingResult) -> list[dict]:
        return [
            {"student_id": e.student_id, "score": e.score, "rank": e.rank}
            for e in r.entries
        ]

    def similarity_view(reports) -> list[dict]:
        return [
            {
                "method_a": s.methods[0].value,
                "method_b": s.methods[1].value,
                "matches": s.matches,
                "n": s.n,
                "percent": s.percent,
            }
            for s in reports
        ]

    def screened_matrix(cohort_id: str) -> DecisionMatrix:
        if cohort_id not in store.screenings:
            _fail(409, f"cohort {cohort_id!r} has not been screened yet")
        if cohort_id not in store.matrices:
            screening = store.screenings[cohort_id]
            if not screening.eligible_ids:
                _fail(422, "no eligible students to rank in this cohort")
            store.matrices[cohort_id] = build_decision_matrix(
                store.cohorts[cohort_id], screening.eligible_ids
            )
        return store.matrices[cohort_id]

    def resolve_weights(body: RankBody, cols) -> tuple[WeightVector, ConsistencyReport | None, bool]:
        """Weight source precedence: explicit override > session > configured judgments."""
        if body.weights is not None:
            if set(body.weights) != set(cols):
                _fail(422, f"weights must cover exactly {sorted(cols)}", "weights")
            try:
                vector = WeightVector.from_raw(
                    tuple(cols), [float(body.weights[c]) for c in cols]
                )
            except DomainError as exc:
                _fail(422, str(exc), "weights")
            return vector, None, False
        if body.session_id is not None:
            session = get_session(body.session_id)
            matrix = session.matrix()
            if matrix is None:
                _fail(
                    409,
                    f"session {session.id!r} is incomplete "
                    f"({session.entered_pairs} of {session.total_pairs} pairs entered)",
                )
            weights = priority_vector(matrix, config.priority_algorithm)
            report = consistency(matrix, weights)
            if not report.consistent and not body.force:
                _fail(
                    409,
                    f"session {session.id!r} is inconsistent (CR {report.cr:.4f} > 0.1); "
                    "revise the judgments or set force",
                )
            return weights, report, not report.consistent
        if config.judgments is None:
            _fail(422, "no judgments configured and none provided", "session_id")
        weights = priority_vector(config.judgments, config.priority_algorithm)
        report = consistency(config.judgments, weights)
        if not report.consistent and not body.force:
            _fail(
                409,
                f"configured judgments are inconsistent (CR {report.cr:.4f} > 0.1); "
                "revise them or set force",
            )
        return weights, report, not report.consistent

    def aggregate_if_ready(cohort_id: str) -> None:
        ranked = store.rankings.get(cohort_id, {})
        if all(m in ranked for m in RANKING_METHODS):
            ranked[Method.AVERAGE_RANK] = aggregate_ranks([ranked[m] for m in RANKING_METHODS])

    def similarity_reports(cohort_id: str):
        ranked = store.rankings.get(cohort_id, {})
        present = [m for m in RANKING_METHODS if m in ranked]
        return [
            rank_similarity(ranked[a], ranked[b])
            for i, a in enumerate(present)
            for b in present[i + 1:]
        ]

    # -- cohorts ------------------------------------------------------------

    @app.post("/cohorts", status_code=201)
    def create_cohort(body: CohortBody):
        if not body.applications:
            _fail(422, "applications must be a non-empty list", "applications")
        apps = []
        for index, record in enumerate(body.applications, start=1):
            missing = {
                "student_id", "mention", "level", "age", "employed", "bacc_year",
                "nationality", "enrolled", "passed_exam", "cp", "op", "ltp", "ec", "dd_km",
            } - set(record)
            if missing:
                _fail(400, f"record {index}: missing field(s) {sorted(missing)}")
            apps.append(record_to_application(record, index))
        keys = {(a.mention, a.level) for a in apps}
        if len(keys) > 1:
            _fail(
                422,
                "applications span multiple cohorts: "
                + ", ".join(sorted(f"{m}/{l.value}" for m, l in keys)),
                "applications",
            )
        mention, level = keys.pop()
        cohort = Cohort(
            mention=mention, level=level,
            applications=tuple(apps), criteria_set=config.criteria(),
        )
        with store.lock:
            cohort_id = store.next_id("c")
            store.cohorts[cohort_id] = cohort
        return {
            "id": cohort_id,
            "mention": mention,
            "level": level.value,
            "count": len(apps),
            "student_ids": list(cohort.student_ids),
        }

    @app.get("/cohorts/{cohort_id}")
    def cohort_summary(cohort_id: str):
        cohort = get_cohort(cohort_id)
        return {
            "id": cohort_id,
            "mention": cohort.mention,
            "level": cohort.level.value,
            "count": len(cohort.applications),
            "student_ids": list(cohort.student_ids),
            "screened": cohort_id in store.screenings,
        }

    @app.post("/cohorts/{cohort_id}/screen")
    def screen(cohort_id: str):
        cohort = get_cohort(cohort_id)
        with store.lock:
            result = screen_cohort(cohort, config.rules)
            store.screenings[cohort_id] = result
            # screening resets anything derived from an earlier screen
            store.matrices.pop(cohort_id, None)
            store.rankings.pop(cohort_id, None)
            store.allocations.pop(cohort_id, None)
        return {
            "cohort_id": cohort_id,
            "counts": {
                "received": result.counts.received,
                "eligible": result.counts.eligible,
                "rejected": result.counts.rejected,
            },
            "eligible_ids": list(result.eligible_ids),
            "outcomes": [
                {
                    "student_id": o.student_id,
                    "verdict": o.verdict,
                    "failed_rules": [r.value for r in o.failed_rules],
                }
                for o in result.outcomes
            ],
        }

    # -- sessions -----------------------------------------------------------

    @app.post("/sessions", status_code=201)
    def create_session(body: SessionBody | None = None):
        labels = tuple((body.criteria if body and body.criteria else None) or ())
        if not labels:
            labels = tuple(c.id for c in config.criteria())
        if len(labels) < 2:
            _fail(422, "a session needs at least 2 criteria", "criteria")
        if len(set(labels)) != len(labels):
            _fail(422, "criteria labels must be unique", "criteria")
        with store.lock:
            session = Session(id=store.next_id("s"), labels=labels)
            store.sessions[session.id] = session
        return session_view(session)

    @app.get("/sessions/{session_id}")
    def session_state(session_id: str):
        return session_view(get_session(session_id))

    @app.put("/sessions/{session_id}/judgments")
    def put_judgment(session_id: str, body: JudgmentBody):
        session = get_session(session_id)
        for name, label in (("first", body.first), ("second", body.second)):
            if label not in session.labels:
                _fail(422, f"unknown criterion {label!r}", name)
        if body.first == body.second:
            _fail(422, "self-comparisons are fixed at 1 and cannot be edited", "second")
        key = (body.first, body.second)
        with store.lock:
            if body.value is None:
                session.cells.pop(key, None)
                session.cells.pop(key[::-1], None)
            else:
                if not saaty_scale_check(body.value):
                    _fail(
                        422,
                        f"value must be an integer 1..9 or its reciprocal, got {body.value}",
                        "value",
                    )
                session.cells[key] = float(body.value)
                session.cells[key[::-1]] = 1.0 / float(body.value)
            return session_view(session)

    @app.get("/sessions/{session_id}/weights")
    def session_weights(session_id: str):
        session = get_session(session_id)
        view = session_view(session)
        if view["status"] == STATUS_INCOMPLETE:
            _fail(
                409,
                f"session {session_id!r} is incomplete "
                f"({session.entered_pairs} of {session.total_pairs} pairs entered)",
            )
        return {
            "session_id": session_id,
            "status": view["status"],
            "weights": view["weights"],
            "consistency": view["consistency"],
        }

    # -- ranking, comparison, allocation -------------------------------------

    @app.post("/cohorts/{cohort_id}/rank")
    def rank(
        cohort_id: str,
        method: str = Query("all"),
        body: RankBody | None = None,
    ):
        body = body or RankBody()
        legal = {m.value for m in RANKING_METHODS} | {"all"}
        if method not in legal:
            _fail(422, f"method must be one of {sorted(legal)}, got {method!r}", "method")
        get_cohort(cohort_id)
        matrix = screened_matrix(cohort_id)
        weights, report, forced = resolve_weights(body, matrix.cols)
        methods = list(RANKING_METHODS) if method == "all" else [Method(method)]
        with store.lock:
            ranked = store.rankings.setdefault(cohort_id, {})
            for m in methods:
                ranked[m] = rank_one(
                    matrix, weights, m, config,
                    cohort_key=store.cohorts[cohort_id].key,
                )
            aggregate_if_ready(cohort_id)
            store.weights[cohort_id] = weights
            store.consistency[cohort_id] = report
            store.forced[cohort_id] = forced
            visible = methods + (
                [Method.AVERAGE_RANK] if Method.AVERAGE_RANK in ranked else []
            )
            return {
                "cohort_id": cohort_id,
                "weights": weights.as_dict(),
                "consistency": report.as_dict() if report else None,
                "forced": forced,
                "rankings": {m.value: ranking_view(ranked[m]) for m in visible},
            }

    @app.get("/cohorts/{cohort_id}/compare")
    def compare(cohort_id: str):
        get_cohort(cohort_id)
        reports = similarity_reports(cohort_id)
        if not reports:
            _fail(409, "comparison needs at least two ranked methods; rank first")
        return {"cohort_id": cohort_id, "similarity": similarity_view(reports)}

    @app.post("/cohorts/{cohort_id}/allocate")
    def do_allocate(cohort_id: str, body: AllocateBody):
        get_cohort(cohort_id)
        if body.capacity < 0:
            _fail(422, f"capacity must be >= 0, got {body.capacity}", "capacity")
        try:
            basis = Method(body.basis)
        except ValueError:
            legal = ", ".join(m.value for m in Method)
            _fail(422, f"basis must be one of {legal}, got {body.basis!r}", "basis")
        with store.lock:
            ranked = store.rankings.get(cohort_id, {})
            if basis not in ranked:
                needed = (
                    "all three methods" if basis is Method.AVERAGE_RANK
                    else f"method {basis.value}"
                )
                _fail(409, f"allocation by {basis.value} requires ranking {needed} first")
            result = allocate(ranked[basis], body.capacity)
            store.allocations[cohort_id] = result
            return {
                "cohort_id": cohort_id,
                "capacity": result.capacity,
                "basis": basis.value,
                "allocated": list(result.allocated),
                "waitlist": list(result.waitlist),
            }

    @app.get("/cohorts/{cohort_id}/results")
    def results(cohort_id: str):
        cohort = get_cohort(cohort_id)
        if cohort_id not in store.screenings:
            _fail(409, f"cohort {cohort_id!r} has not been screened yet")
        with store.lock:
            bundle = ResultBundle(
                cohort_key=cohort.key,
                generated_at=clock(),
                config_hash=config.hash,
                screening=store.screenings[cohort_id],
                matrix=store.matrices.get(cohort_id),
                weights=store.weights.get(cohort_id),
                consistency=store.consistency.get(cohort_id),
                algorithm=config.priority_algorithm,
                forced=store.forced.get(cohort_id, False),
                rankings=dict(store.rankings.get(cohort_id, {})),
                similarity=tuple(similarity_reports(cohort_id)),
                allocation=store.allocations.get(cohort_id),
            )
        return Response(content=save_results(bundle), media_type="application/json")

    return app


app = create_app()
