"""Ingestion, configuration, result bundles, and report export.

Flat files in, self-describing JSON bundles out. Application files are
all-or-nothing: one bad row fails the whole load so a cohort is never
half-ingested. Result bundles carry a config hash and an integrity digest,
and serialize canonically so identical inputs reproduce identical bytes.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources

import numpy as np

from .domain import (
    DEFAULT_REF_MAX,
    SOCIAL_CRITERION_ORDER,
    Cohort,
    Criterion,
    DecisionMatrix,
    Level,
    Scale,
    StudentApplication,
    social_criteria,
)
from .eligibility import (
    EligibilityRuleSet,
    RuleId,
    ScreeningCounts,
    ScreeningOutcome,
    ScreeningResult,
)
from .errors import ConfigError, DomainError, DuplicateIdError, IntegrityError, ParseError
from .methods import Method, PreferenceFunction, PreferenceShape
from .pairwise import ConsistencyReport, PairwiseMatrix, PriorityAlgorithm, WeightVector
from .ranking import AllocationResult, RankEntry, RankingResult, SimilarityReport


class FileFormat(Enum):
    CSV = "csv"
    JSON = "json"


APPLICATIONS_HEADER = (
    "student_id", "mention", "level", "age", "employed", "bacc_year",
    "nationality", "enrolled", "passed_exam", "cp", "op", "ltp", "ec", "dd_km",
)

BUNDLE_SCHEMA = "housing-dss/result-bundle/v1"


# ---------------------------------------------------------------------------
# low-level field parsing


def _as_text(source) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, str):
        return source
    data = source.read()
    return data.decode("utf-8") if isinstance(data, bytes) else data


def _parse_bool(raw: str, field_name: str, line: int) -> bool:
    norm = str(raw).strip().lower()
    if norm in ("true", "false"):
        return norm == "true"
    raise ParseError(
        f"line {line}: {field_name} must be true or false, got {raw!r}",
        line=line, field=field_name,
    )


def _parse_int(raw: str, field_name: str, line: int) -> int:
    try:
        return int(str(raw).strip())
    except (TypeError, ValueError):
        raise ParseError(
            f"line {line}: {field_name} must be an integer, got {raw!r}",
            line=line, field=field_name,
        ) from None


def _parse_float(raw: str, field_name: str, line: int) -> float:
    # Accept both decimal marks: source tables in this domain are often
    # exported from French-locale tools that print "0,68".
    text = str(raw).strip().replace(",", ".")
    try:
        return float(text)
    except (TypeError, ValueError):
        raise ParseError(
            f"line {line}: {field_name} must be a number, got {raw!r}",
            line=line, field=field_name,
        ) from None


def _parse_level(raw: str, line: int) -> Level:
    try:
        return Level(str(raw).strip())
    except ValueError:
        legal = ", ".join(lvl.value for lvl in Level)
        raise ParseError(
            f"line {line}: level must be one of {legal}, got {raw!r}",
            line=line, field="level",
        ) from None


def record_to_application(record: dict, line: int) -> StudentApplication:
    """Build one StudentApplication from a wire record; errors carry the line."""
    try:
        return StudentApplication(
            student_id=str(record["student_id"]).strip(),
            mention=str(record["mention"]).strip(),
            level=_parse_level(record["level"], line),
            age=_parse_int(record["age"], "age", line),
            employed=_parse_bool(record["employed"], "employed", line),
            bacc_year=_parse_int(record["bacc_year"], "bacc_year", line),
            nationality=str(record["nationality"]).strip(),
            enrolled=_parse_bool(record["enrolled"], "enrolled", line),
            passed_exam=_parse_bool(record["passed_exam"], "passed_exam", line),
            cp=_parse_float(record["cp"], "cp", line),
            op=_parse_float(record["op"], "op", line),
            ltp=_parse_float(record["ltp"], "ltp", line),
            ec=_parse_int(record["ec"], "ec", line),
            dd=_parse_float(record["dd_km"], "dd_km", line),
        )
    except ParseError:
        raise
    except DomainError as exc:
        raise DomainError(f"line {line}: {exc}", field=exc.field) from exc


def _group_cohorts(apps: list[StudentApplication], lines: list[int]) -> list[Cohort]:
    """Group applications by (mention, level), preserving first-seen order."""
    seen_ids: dict[tuple[str, str], set[str]] = {}
    grouped: dict[tuple[str, str], list[StudentApplication]] = {}
    order: list[tuple[str, str]] = []
    for app, line in zip(apps, lines):
        key = (app.mention, app.level.value)
        if key not in grouped:
            grouped[key] = []
            seen_ids[key] = set()
            order.append(key)
        if app.student_id in seen_ids[key]:
            raise DuplicateIdError(
                f"line {line}: duplicate student_id {app.student_id!r} "
                f"in cohort ({app.mention}, {app.level.value})",
                field="student_id",
            )
        seen_ids[key].add(app.student_id)
        grouped[key].append(app)
    return [
        Cohort(mention=m, level=Level(lvl), applications=tuple(grouped[(m, lvl)]))
        for m, lvl in order
    ]


def load_applications(source, format: FileFormat = FileFormat.CSV) -> list[Cohort]:
    """Parse an application file into cohorts grouped by (mention, level).

    All-or-nothing: the first bad row aborts the whole load. Row order is
    preserved within each cohort; a header-only file yields zero cohorts.
    """
    text = _as_text(source)
    apps: list[StudentApplication] = []
    lines: list[int] = []

    if format is FileFormat.CSV:
        reader = csv.reader(io.StringIO(text))
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty file: missing header row", line=1) from None
        if tuple(h.strip() for h in header) != APPLICATIONS_HEADER:
            raise ParseError(
                "line 1: header must be exactly "
                f"{','.join(APPLICATIONS_HEADER)}, got {','.join(header)!r}",
                line=1,
            )
        for line, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue  # ignore blank lines
            if len(row) != len(APPLICATIONS_HEADER):
                raise ParseError(
                    f"line {line}: expected {len(APPLICATIONS_HEADER)} fields, got {len(row)}",
                    line=line,
                )
            apps.append(record_to_application(dict(zip(APPLICATIONS_HEADER, row)), line))
            lines.append(line)
    else:
        try:
            records = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}", line=exc.lineno) from exc
        if not isinstance(records, list):
            raise ParseError("JSON applications must be a top-level array")
        for index, record in enumerate(records, start=1):
            if not isinstance(record, dict):
                raise ParseError(f"record {index}: expected an object", line=index)
            unknown = set(record) - set(APPLICATIONS_HEADER)
            if unknown:
                raise ParseError(
                    f"record {index}: unknown field(s) {sorted(unknown)}", line=index
                )
            missing = set(APPLICATIONS_HEADER) - set(record)
            if missing:
                raise ParseError(
                    f"record {index}: missing field(s) {sorted(missing)}", line=index
                )
            apps.append(record_to_application(record, index))
            lines.append(index)

    return _group_cohorts(apps, lines)


def _bool_str(value: bool) -> str:
    return "true" if value else "false"


def _num_str(value: float) -> str:
    f = float(value)
    return str(int(f)) if f.is_integer() else repr(f)


def dump_applications(cohorts, format: FileFormat = FileFormat.CSV) -> bytes:
    """Serialize cohorts back to the wire format (dot decimals, true/false)."""
    rows = []
    for cohort in cohorts:
        for app in cohort.applications:
            rows.append({
                "student_id": app.student_id,
                "mention": app.mention,
                "level": app.level.value,
                "age": app.age,
                "employed": app.employed,
                "bacc_year": app.bacc_year,
                "nationality": app.nationality,
                "enrolled": app.enrolled,
                "passed_exam": app.passed_exam,
                "cp": app.cp,
                "op": app.op,
                "ltp": app.ltp,
                "ec": app.ec,
                "dd_km": app.dd,
            })
    if format is FileFormat.JSON:
        return (json.dumps(rows, indent=2, sort_keys=False) + "\n").encode("utf-8")
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(APPLICATIONS_HEADER)
    for row in rows:
        writer.writerow([
            row["student_id"], row["mention"], row["level"], row["age"],
            _bool_str(row["employed"]), row["bacc_year"], row["nationality"],
            _bool_str(row["enrolled"]), _bool_str(row["passed_exam"]),
            _num_str(row["cp"]), _num_str(row["op"]), _num_str(row["ltp"]),
            row["ec"], _num_str(row["dd_km"]),
        ])
    return out.getvalue().encode("utf-8")


# ---------------------------------------------------------------------------
# configuration


def _check_keys(section: dict, allowed: tuple[str, ...], where: str) -> None:
    unknown = set(section) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) {sorted(unknown)} in {where}")


def _coerce(value, cast, where: str):
    try:
        return cast(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{where}: expected a number, got {value!r}") from None


def _parse_preference(spec: dict, where: str) -> PreferenceFunction:
    _check_keys(spec, ("shape", "q", "p"), where)
    try:
        shape = PreferenceShape(str(spec.get("shape", "usual")))
    except ValueError:
        legal = ", ".join(s.value for s in PreferenceShape)
        raise ConfigError(
            f"{where}: shape must be one of {legal}, got {spec.get('shape')!r}"
        ) from None
    try:
        return PreferenceFunction(
            shape=shape, q=float(spec.get("q", 0.0)), p=float(spec.get("p", 0.0))
        )
    except DomainError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


@dataclass(frozen=True)
class AppConfig:
    """Validated configuration document plus its canonical hash."""

    document: dict
    ref_max: dict[str, float]
    rules: EligibilityRuleSet
    priority_algorithm: PriorityAlgorithm
    preference_default: PreferenceFunction
    preference_overrides: dict[str, PreferenceFunction]
    judgments: PairwiseMatrix | None
    allocation_basis: Method
    default_capacity: int | None
    capacity: dict[str, int] = field(default_factory=dict)

    @property
    def hash(self) -> str:
        canonical = json.dumps(self.document, sort_keys=True, separators=(",", ":"))
        return "sha256:" + hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def criteria(self) -> tuple[Criterion, ...]:
        return social_criteria(self.ref_max)

    def preference_functions(self, cols) -> dict[str, PreferenceFunction]:
        return {c: self.preference_overrides.get(c, self.preference_default) for c in cols}

    def capacity_for(self, cohort_key: tuple[str, str]) -> int | None:
        return self.capacity.get(f"{cohort_key[0]}/{cohort_key[1]}", self.default_capacity)


def load_config(source) -> AppConfig:
    """Parse and validate a JSON configuration document.

    Unknown keys are rejected at every level; anything omitted falls back
    to the shipped defaults (see ``default_config``). An empty document is
    therefore valid.
    """
    text = _as_text(source)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in config: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    _check_keys(doc, ("criteria", "eligibility", "methods", "judgments", "allocation"), "config")

    criteria = doc.get("criteria", {})
    _check_keys(criteria, ("ref_max",), "config.criteria")
    ref_max = dict(DEFAULT_REF_MAX)
    overrides = criteria.get("ref_max", {})
    _check_keys(overrides, SOCIAL_CRITERION_ORDER, "config.criteria.ref_max")
    for key, value in overrides.items():
        try:
            ref_max[key] = float(value)
        except (TypeError, ValueError):
            raise ConfigError(f"config.criteria.ref_max.{key} must be a number") from None

    elig = doc.get("eligibility", {})
    _check_keys(
        elig,
        ("age_bounds", "bacc_years", "allowed_nationalities",
         "require_enrolled", "require_passed", "forbid_employed"),
        "config.eligibility",
    )

    def _level(name: str, where: str) -> Level:
        try:
            return Level(name)
        except ValueError:
            legal = ", ".join(lvl.value for lvl in Level)
            raise ConfigError(f"{where}: level must be one of {legal}, got {name!r}") from None

    age_bounds = dict(EligibilityRuleSet().age_bounds)
    for name, bounds in elig.get("age_bounds", {}).items():
        level = _level(name, "config.eligibility.age_bounds")
        if not (isinstance(bounds, (list, tuple)) and len(bounds) == 2):
            raise ConfigError(
                f"config.eligibility.age_bounds.{name} must be [min, max], got {bounds!r}"
            )
        where = f"config.eligibility.age_bounds.{name}"
        age_bounds[level] = (_coerce(bounds[0], int, where), _coerce(bounds[1], int, where))

    bacc_years = dict(EligibilityRuleSet().bacc_years)
    for name, years in elig.get("bacc_years", {}).items():
        level = _level(name, "config.eligibility.bacc_years")
        if not isinstance(years, (list, tuple)) or not years:
            raise ConfigError(
                f"config.eligibility.bacc_years.{name} must be a non-empty list of years"
            )
        bacc_years[level] = frozenset(
            _coerce(y, int, f"config.eligibility.bacc_years.{name}") for y in years
        )

    nationalities = elig.get("allowed_nationalities", ["Malagasy"])
    allowed = None if nationalities is None else frozenset(str(n) for n in nationalities)
    try:
        rules = EligibilityRuleSet(
            age_bounds=age_bounds,
            bacc_years=bacc_years,
            allowed_nationalities=allowed,
            require_enrolled=bool(elig.get("require_enrolled", True)),
            require_passed=bool(elig.get("require_passed", True)),
            forbid_employed=bool(elig.get("forbid_employed", True)),
        )
    except ConfigError:
        raise
    except DomainError as exc:
        raise ConfigError(f"config.eligibility: {exc}") from exc

    methods = doc.get("methods", {})
    _check_keys(
        methods,
        ("priority_algorithm", "preference_function", "preference_overrides"),
        "config.methods",
    )
    try:
        algorithm = PriorityAlgorithm(str(methods.get("priority_algorithm", "eigenvector")))
    except ValueError:
        legal = ", ".join(a.value for a in PriorityAlgorithm)
        raise ConfigError(
            f"config.methods.priority_algorithm must be one of {legal}, "
            f"got {methods.get('priority_algorithm')!r}"
        ) from None
    preference_default = _parse_preference(
        methods.get("preference_function", {"shape": "usual"}),
        "config.methods.preference_function",
    )
    preference_overrides = {}
    for crit, spec in methods.get("preference_overrides", {}).items():
        if crit not in SOCIAL_CRITERION_ORDER:
            raise ConfigError(f"config.methods.preference_overrides: unknown criterion {crit!r}")
        preference_overrides[crit] = _parse_preference(
            spec, f"config.methods.preference_overrides.{crit}"
        )

    judgments = None
    if "judgments" in doc:
        jud = doc["judgments"]
        _check_keys(jud, ("labels", "upper_triangle"), "config.judgments")
        labels = tuple(str(x) for x in jud.get("labels", SOCIAL_CRITERION_ORDER))
        triangle = {}
        for pair, value in jud.get("upper_triangle", {}).items():
            parts = str(pair).split(":")
            if len(parts) != 2:
                raise ConfigError(
                    f"config.judgments.upper_triangle: key must look like 'A:B', got {pair!r}"
                )
            triangle[(parts[0], parts[1])] = _coerce(
                value, float, f"config.judgments.upper_triangle.{pair}"
            )
        try:
            judgments = PairwiseMatrix.from_upper_triangle(labels, triangle)
        except DomainError as exc:
            raise ConfigError(f"config.judgments: {exc}") from exc

    alloc = doc.get("allocation", {})
    _check_keys(alloc, ("basis", "default_capacity", "capacity"), "config.allocation")
    basis_name = str(alloc.get("basis", "average_rank"))
    try:
        basis = Method(basis_name)
    except ValueError:
        legal = ", ".join(m.value for m in Method)
        raise ConfigError(
            f"config.allocation.basis must be one of {legal}, got {basis_name!r}"
        ) from None
    raw_default = alloc.get("default_capacity")
    default_capacity = (
        None if raw_default is None
        else _coerce(raw_default, int, "config.allocation.default_capacity")
    )
    capacity = {}
    for key, value in alloc.get("capacity", {}).items():
        if "/" not in key:
            raise ConfigError(
                f"config.allocation.capacity: key must look like 'mention/level', got {key!r}"
            )
        capacity[str(key)] = _coerce(value, int, f"config.allocation.capacity.{key}")

    return AppConfig(
        document=doc,
        ref_max=ref_max,
        rules=rules,
        priority_algorithm=algorithm,
        preference_default=preference_default,
        preference_overrides=preference_overrides,
        judgments=judgments,
        allocation_basis=basis,
        default_capacity=default_capacity,
        capacity=capacity,
    )


def packaged_data(name: str) -> bytes:
    """Read one of the data files shipped with the package."""
    return resources.files("housing_dss.data").joinpath(name).read_bytes()


def default_config() -> AppConfig:
    """The configuration shipped with the package."""
    return load_config(packaged_data("config_default.json"))


# ---------------------------------------------------------------------------
# result bundles


@dataclass(frozen=True, eq=False)
class ResultBundle:
    """Everything one pipeline run produced, self-describing for audit.

    ``matrix``/``weights``/``consistency`` are ``None`` when no student
    survived screening; ``allocation`` is ``None`` when no capacity was
    configured for the cohort.
    """

    cohort_key: tuple[str, str]
    generated_at: str
    config_hash: str
    screening: ScreeningResult
    matrix: DecisionMatrix | None
    weights: WeightVector | None
    consistency: ConsistencyReport | None
    algorithm: PriorityAlgorithm
    forced: bool
    rankings: dict[Method, RankingResult]
    similarity: tuple[SimilarityReport, ...]
    allocation: AllocationResult | None

    def __eq__(self, other) -> bool:
        return isinstance(other, ResultBundle) and self.to_dict() == other.to_dict()

    def to_dict(self) -> dict:
        def ranking_dict(r: RankingResult) -> dict:
            return {
                "tie_policy": r.tie_policy,
                "entries": [
                    {"student_id": e.student_id, "score": e.score, "rank": e.rank}
                    for e in r.entries
                ],
            }

        return {
            "schema": BUNDLE_SCHEMA,
            "generated_at": self.generated_at,
            "config_hash": self.config_hash,
            "cohort": {"mention": self.cohort_key[0], "level": self.cohort_key[1]},
            "screening": {
                "counts": {
                    "received": self.screening.counts.received,
                    "eligible": self.screening.counts.eligible,
                    "rejected": self.screening.counts.rejected,
                },
                "outcomes": [
                    {
                        "student_id": o.student_id,
                        "verdict": o.verdict,
                        "failed_rules": [r.value for r in o.failed_rules],
                    }
                    for o in self.screening.outcomes
                ],
            },
            "matrix": None if self.matrix is None else {
                "rows": list(self.matrix.rows),
                "cols": list(self.matrix.cols),
                "scale": self.matrix.scale.value,
                "values": [[float(v) for v in row] for row in self.matrix.values],
            },
            "weights": None if self.weights is None else {
                "labels": list(self.weights.labels),
                "values": [float(v) for v in self.weights.values],
                "algorithm": self.algorithm.value,
            },
            "consistency": None if self.consistency is None else self.consistency.as_dict(),
            "forced": self.forced,
            "rankings": {m.value: ranking_dict(r) for m, r in self.rankings.items()},
            "similarity": [
                {
                    "methods": [s.methods[0].value, s.methods[1].value],
                    "n": s.n,
                    "matches": s.matches,
                    "percent": s.percent,
                }
                for s in self.similarity
            ],
            "allocation": None if self.allocation is None else {
                "capacity": self.allocation.capacity,
                "basis": self.allocation.basis.method.value,
                "allocated": list(self.allocation.allocated),
                "waitlist": list(self.allocation.waitlist),
            },
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "ResultBundle":
        if payload.get("schema") != BUNDLE_SCHEMA:
            raise ParseError(f"unsupported bundle schema {payload.get('schema')!r}")
        cohort_key = (payload["cohort"]["mention"], payload["cohort"]["level"])

        outcomes = tuple(
            ScreeningOutcome(
                student_id=o["student_id"],
                verdict=o["verdict"],
                failed_rules=tuple(RuleId(r) for r in o["failed_rules"]),
            )
            for o in payload["screening"]["outcomes"]
        )
        counts = payload["screening"]["counts"]
        screening = ScreeningResult(
            outcomes=outcomes,
            eligible_ids=tuple(o.student_id for o in outcomes if o.verdict == "ELIGIBLE"),
            rejected=tuple(o for o in outcomes if o.verdict == "REJECTED"),
            counts=ScreeningCounts(**counts),
        )

        matrix = None
        if payload["matrix"] is not None:
            m = payload["matrix"]
            matrix = DecisionMatrix(
                rows=tuple(m["rows"]), cols=tuple(m["cols"]),
                values=np.asarray(m["values"], dtype=float), scale=Scale(m["scale"]),
            )

        weights = None
        algorithm = PriorityAlgorithm.EIGENVECTOR
        if payload["weights"] is not None:
            w = payload["weights"]
            weights = WeightVector(labels=tuple(w["labels"]), values=np.asarray(w["values"]))
            algorithm = PriorityAlgorithm(w["algorithm"])

        consistency = None
        if payload["consistency"] is not None:
            consistency = ConsistencyReport(**payload["consistency"])

        def ranking_from(method: Method, data: dict) -> RankingResult:
            return RankingResult(
                method=method,
                entries=tuple(
                    RankEntry(e["student_id"], float(e["score"]), int(e["rank"]))
                    for e in data["entries"]
                ),
                tie_policy=data["tie_policy"],
                cohort_key=cohort_key,
                weights=weights.as_dict() if weights is not None else None,
            )

        rankings = {
            Method(name): ranking_from(Method(name), data)
            for name, data in payload["rankings"].items()
        }

        similarity = tuple(
            SimilarityReport(
                methods=(Method(s["methods"][0]), Method(s["methods"][1])),
                n=int(s["n"]), matches=int(s["matches"]), percent=float(s["percent"]),
            )
            for s in payload["similarity"]
        )

        allocation = None
        if payload["allocation"] is not None:
            a = payload["allocation"]
            allocation = AllocationResult(
                capacity=int(a["capacity"]),
                allocated=tuple(a["allocated"]),
                waitlist=tuple(a["waitlist"]),
                basis=rankings[Method(a["basis"])],
            )

        return cls(
            cohort_key=cohort_key,
            generated_at=payload["generated_at"],
            config_hash=payload["config_hash"],
            screening=screening,
            matrix=matrix,
            weights=weights,
            consistency=consistency,
            algorithm=algorithm,
            forced=bool(payload["forced"]),
            rankings=rankings,
            similarity=similarity,
            allocation=allocation,
        )


def _canonical_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), allow_nan=False)


def save_results(bundle: ResultBundle) -> bytes:
    """Serialize a bundle with an integrity digest over its canonical form."""
    payload = bundle.to_dict()
    digest = hashlib.sha256(_canonical_json(payload).encode("utf-8")).hexdigest()
    document = {"bundle": payload, "integrity": {"algorithm": "sha256", "digest": digest}}
    return (_canonical_json(document) + "\n").encode("utf-8")


def load_results(data) -> ResultBundle:
    """Parse a bundle, verifying the integrity digest before anything else."""
    text = _as_text(data)
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in bundle: {exc}", line=exc.lineno) from exc
    if not isinstance(document, dict) or set(document) != {"bundle", "integrity"}:
        raise ParseError("bundle document must contain exactly 'bundle' and 'integrity'")
    integrity = document["integrity"]
    if integrity.get("algorithm") != "sha256":
        raise IntegrityError(f"unsupported digest algorithm {integrity.get('algorithm')!r}")
    digest = hashlib.sha256(_canonical_json(document["bundle"]).encode("utf-8")).hexdigest()
    if digest != integrity.get("digest"):
        raise IntegrityError(
            f"bundle integrity check failed: digest {digest} != recorded {integrity.get('digest')}"
        )
    return ResultBundle.from_dict(document["bundle"])


# ---------------------------------------------------------------------------
# report export

RANKINGS_COLUMNS = ("method", "student_id", "score", "rank")
SIMILARITY_COLUMNS = ("method_a", "method_b", "matches", "n", "percent")
ALLOCATION_COLUMNS = ("student_id", "status", "position")

_METHOD_EXPORT_ORDER = (Method.AHP, Method.WSM, Method.PROMETHEE, Method.AVERAGE_RANK)


def _report_tables(bundle: ResultBundle) -> dict[str, list[dict]]:
    rankings = []
    for method in _METHOD_EXPORT_ORDER:
        if method not in bundle.rankings:
            continue
        for entry in bundle.rankings[method].entries:
            rankings.append({
                "method": method.value,
                "student_id": entry.student_id,
                "score": entry.score,
                "rank": entry.rank,
            })
    similarity = [
        {
            "method_a": s.methods[0].value,
            "method_b": s.methods[1].value,
            "matches": s.matches,
            "n": s.n,
            "percent": s.percent,
        }
        for s in bundle.similarity
    ]
    allocation = []
    if bundle.allocation is not None:
        for position, sid in enumerate(bundle.allocation.allocated, start=1):
            allocation.append({"student_id": sid, "status": "allocated", "position": position})
        for position, sid in enumerate(bundle.allocation.waitlist, start=1):
            allocation.append({"student_id": sid, "status": "waitlist", "position": position})
    return {"rankings": rankings, "similarity": similarity, "allocation": allocation}


def export_report(bundle: ResultBundle, format: FileFormat = FileFormat.JSON) -> bytes:
    """Flatten a bundle into stable report tables.

    JSON: one object with ``rankings``, ``similarity`` and ``allocation``
    arrays. CSV: the same three tables as sections, each introduced by a
    ``# <table>`` comment line and its header row; headers appear even when
    a table is empty.
    """
    tables = _report_tables(bundle)
    if format is FileFormat.JSON:
        return (json.dumps(tables, indent=2) + "\n").encode("utf-8")
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    for name, columns in (
        ("rankings", RANKINGS_COLUMNS),
        ("similarity", SIMILARITY_COLUMNS),
        ("allocation", ALLOCATION_COLUMNS),
    ):
        out.write(f"# {name}\n")
        writer.writerow(columns)
        for row in tables[name]:
            writer.writerow([row[c] for c in columns])
    return out.getvalue().encode("utf-8")
