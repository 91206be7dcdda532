"""Domain model: criteria, applications, cohorts, and the scale-10 decision matrix.

Raw social-criteria values (physical capacity, home distance, dependent
children, parent workplace, orphan status) are rescaled onto a common
0..10 scale before any ranking method sees them. Each criterion carries a
reference maximum: the raw value that maps to 10.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DomainError, EmptyCohortError, UnknownIdError


class CriterionKind(Enum):
    BASIC = "basic"
    SOCIAL = "social"


class Direction(Enum):
    BENEFIT = "benefit"


class Level(Enum):
    L1 = "L1"
    L2 = "L2"
    L3 = "L3"
    M1 = "M1"
    M2 = "M2"
    PHD = "PhD"


class Scale(Enum):
    RAW = "raw"
    SCALE10 = "scale10"


@dataclass(frozen=True)
class Criterion:
    """One evaluation dimension.

    ``ref_max`` is the raw value that normalizes to 10. ``allowed_values``
    restricts enumerated criteria (CP, OP, LTP) to their legal raw levels;
    ``None`` means any non-negative value is legal (EC, DD).
    """

    id: str
    name: str
    kind: CriterionKind = CriterionKind.SOCIAL
    direction: Direction = Direction.BENEFIT
    ref_max: float = 10.0
    value_domain: str = ""
    allowed_values: frozenset[float] | None = None

    def __post_init__(self):
        if not self.id:
            raise DomainError("criterion id must be non-empty", field="id")
        if not (math.isfinite(self.ref_max) and self.ref_max > 0):
            raise DomainError(
                f"criterion {self.id}: ref_max must be a positive real, got {self.ref_max}",
                field="ref_max",
            )

    def check_raw(self, raw: float) -> None:
        """Reject raw values outside this criterion's legal domain."""
        if not math.isfinite(raw):
            raise DomainError(f"{self.id} must be finite, got {raw!r}", field=self.id.lower())
        if raw < 0:
            raise DomainError(f"{self.id} must be non-negative, got {raw!r}", field=self.id.lower())
        if self.allowed_values is not None and raw not in self.allowed_values:
            legal = "{" + ",".join(str(_fmt_num(v)) for v in sorted(self.allowed_values)) + "}"
            raise DomainError(
                f"{self.id.lower()} must be one of {legal}, got {_fmt_num(raw)}",
                field=self.id.lower(),
            )


def _fmt_num(v: float):
    return int(v) if float(v).is_integer() else v


# Reference maxima that reproduce the published normalized matrix; every one
# of them is configurable (see persistence.load_config).
DEFAULT_REF_MAX = {"CP": 10.0, "DD": 1467.0, "EC": 7.0, "LTP": 5.0, "OP": 10.0}

# Canonical column order used by every matrix in the system.
SOCIAL_CRITERION_ORDER = ("CP", "DD", "EC", "LTP", "OP")


def social_criteria(ref_max: dict[str, float] | None = None) -> tuple[Criterion, ...]:
    """The five social criteria in canonical order, with optional ref_max overrides."""
    maxima = dict(DEFAULT_REF_MAX)
    if ref_max:
        for key, value in ref_max.items():
            if key not in maxima:
                raise DomainError(f"unknown social criterion {key!r}", field="ref_max")
            maxima[key] = float(value)
    return (
        Criterion(
            "CP", "Physical capacity", ref_max=maxima["CP"],
            value_domain="5 = normal, 10 = disability",
            allowed_values=frozenset({5.0, 10.0}),
        ),
        Criterion(
            "DD", "Distance from home", ref_max=maxima["DD"],
            value_domain="non-negative km",
        ),
        Criterion(
            "EC", "Dependent children of parent", ref_max=maxima["EC"],
            value_domain="non-negative count",
        ),
        Criterion(
            "LTP", "Parent's place of work", ref_max=maxima["LTP"],
            value_domain="5 = university, 0 = other",
            allowed_values=frozenset({0.0, 5.0}),
        ),
        Criterion(
            "OP", "Orphan of parent", ref_max=maxima["OP"],
            value_domain="0 = none, 5 = one parent, 10 = both",
            allowed_values=frozenset({0.0, 5.0, 10.0}),
        ),
    )


@dataclass(frozen=True)
class StudentApplication:
    """One applicant's raw attributes: six basic criteria plus five social values."""

    student_id: str
    mention: str
    level: Level
    age: int
    employed: bool
    bacc_year: int
    nationality: str
    enrolled: bool
    passed_exam: bool
    cp: float
    op: float
    ltp: float
    ec: int
    dd: float

    def __post_init__(self):
        if not self.student_id:
            raise DomainError("student_id must be non-empty", field="student_id")
        if self.age <= 0:
            raise DomainError(f"age must be positive, got {self.age}", field="age")
        if self.cp not in (5.0, 10.0):
            raise DomainError(f"cp must be one of {{5,10}}, got {_fmt_num(self.cp)}", field="cp")
        if self.op not in (0.0, 5.0, 10.0):
            raise DomainError(f"op must be one of {{0,5,10}}, got {_fmt_num(self.op)}", field="op")
        if self.ltp not in (0.0, 5.0):
            raise DomainError(f"ltp must be one of {{0,5}}, got {_fmt_num(self.ltp)}", field="ltp")
        if self.ec < 0:
            raise DomainError(f"ec must be a non-negative integer, got {self.ec}", field="ec")
        if not math.isfinite(self.dd) or self.dd < 0:
            raise DomainError(f"dd must be non-negative km, got {self.dd!r}", field="dd")

    def social_value(self, criterion_id: str) -> float:
        """Raw value for one of the five social criteria."""
        try:
            return float(
                {"CP": self.cp, "DD": self.dd, "EC": self.ec, "LTP": self.ltp, "OP": self.op}[
                    criterion_id
                ]
            )
        except KeyError:
            raise UnknownIdError(f"unknown social criterion {criterion_id!r}") from None


@dataclass(frozen=True)
class Cohort:
    """All applications for one (mention, level) pair.

    Screening and ranking never cross cohort boundaries: the process runs
    per specialty and per level.
    """

    mention: str
    level: Level
    applications: tuple[StudentApplication, ...]
    criteria_set: tuple[Criterion, ...] = field(default_factory=social_criteria)

    def __post_init__(self):
        seen = set()
        for app in self.applications:
            if (app.mention, app.level) != (self.mention, self.level):
                raise DomainError(
                    f"application {app.student_id} belongs to "
                    f"({app.mention}, {app.level.value}), not ({self.mention}, {self.level.value})"
                )
            if app.student_id in seen:
                raise DomainError(f"duplicate student_id {app.student_id!r} in cohort")
            seen.add(app.student_id)

    @property
    def key(self) -> tuple[str, str]:
        return (self.mention, self.level.value)

    @property
    def student_ids(self) -> tuple[str, ...]:
        return tuple(app.student_id for app in self.applications)

    def application(self, student_id: str) -> StudentApplication:
        for app in self.applications:
            if app.student_id == student_id:
                return app
        raise UnknownIdError(f"unknown student_id {student_id!r} in cohort {self.key}")


@dataclass(frozen=True)
class DecisionMatrix:
    """Students x social criteria, either raw or normalized to the 0..10 scale."""

    rows: tuple[str, ...]
    cols: tuple[str, ...]
    values: np.ndarray
    scale: Scale

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (len(self.rows), len(self.cols)):
            raise DomainError(
                f"matrix shape {values.shape} does not match "
                f"{len(self.rows)} rows x {len(self.cols)} cols"
            )
        if len(set(self.rows)) != len(self.rows):
            raise DomainError("duplicate row labels in decision matrix")
        if len(set(self.cols)) != len(self.cols):
            raise DomainError("duplicate column labels in decision matrix")
        if not np.all(np.isfinite(values)):
            raise DomainError("decision matrix entries must be finite")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def column(self, criterion_id: str) -> np.ndarray:
        try:
            j = self.cols.index(criterion_id)
        except ValueError:
            raise UnknownIdError(f"unknown criterion {criterion_id!r}") from None
        return self.values[:, j]

    def cell(self, student_id: str, criterion_id: str) -> float:
        try:
            i = self.rows.index(student_id)
        except ValueError:
            raise UnknownIdError(f"unknown student_id {student_id!r}") from None
        j = self.cols.index(criterion_id) if criterion_id in self.cols else None
        if j is None:
            raise UnknownIdError(f"unknown criterion {criterion_id!r}")
        return float(self.values[i, j])


def normalize_value(raw: float, criterion: Criterion) -> float:
    """Rescale a raw benefit value onto 0..10: raw / ref_max * 10.

    Linear below the reference maximum; values above it clamp to 10 so the
    scale stays bounded. Raises for negative or non-finite input.
    """
    if not math.isfinite(raw):
        raise DomainError(f"{criterion.id}: raw value must be finite, got {raw!r}")
    if raw < 0:
        raise DomainError(f"{criterion.id}: raw value must be non-negative, got {raw!r}")
    return min(raw / criterion.ref_max * 10.0, 10.0)


def build_decision_matrix(cohort: Cohort, eligible_ids: list[str] | tuple[str, ...]) -> DecisionMatrix:
    """Normalized decision matrix for the eligible students, rows in the given order."""
    if len(eligible_ids) == 0:
        raise EmptyCohortError(f"no eligible students in cohort {cohort.key}")
    criteria = cohort.criteria_set
    rows = []
    for student_id in eligible_ids:
        app = cohort.application(student_id)
        rows.append([normalize_value(app.social_value(c.id), c) for c in criteria])
    return DecisionMatrix(
        rows=tuple(eligible_ids),
        cols=tuple(c.id for c in criteria),
        values=np.array(rows, dtype=float),
        scale=Scale.SCALE10,
    )
