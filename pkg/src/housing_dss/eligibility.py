"""Stage-1 screening: accept or reject each application against the basic criteria.

Every rule is evaluated (no short-circuit) so a rejection lists all the
rules it failed. Administrators must be able to answer "why was this
application rejected?" from the outcome alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .domain import Cohort, Level, StudentApplication
from .errors import ConfigError, DomainError


class RuleId(Enum):
    AGE = "AGE"
    BACC_YEAR = "BACC_YEAR"
    ADMINISTRATIVE_REGISTRATION = "ADMINISTRATIVE_REGISTRATION"
    EXAMINATION_RESULT = "EXAMINATION_RESULT"
    NATIONALITY = "NATIONALITY"
    PROFESSIONAL_SITUATION = "PROFESSIONAL_SITUATION"


# Shipped defaults: bounds consistent with the admitted 2017-18 L1 intake
# (ages 16..22, baccalaureate 2017). Institution policy overrides via config.
DEFAULT_AGE_BOUNDS: dict[Level, tuple[int, int]] = {
    Level.L1: (16, 22),
    Level.L2: (17, 23),
    Level.L3: (18, 24),
    Level.M1: (19, 26),
    Level.M2: (20, 27),
    Level.PHD: (21, 35),
}

DEFAULT_BACC_YEARS: dict[Level, frozenset[int]] = {
    Level.L1: frozenset({2017}),
    Level.L2: frozenset({2016}),
    Level.L3: frozenset({2015}),
    Level.M1: frozenset({2014}),
    Level.M2: frozenset({2013}),
    Level.PHD: frozenset({2008, 2009, 2010, 2011, 2012}),
}


@dataclass(frozen=True)
class EligibilityRuleSet:
    """Data-driven screening rules; no threshold is hard-coded in the engine.

    ``allowed_nationalities`` of ``None`` means any nationality is accepted.
    """

    age_bounds: dict[Level, tuple[int, int]] = field(
        default_factory=lambda: dict(DEFAULT_AGE_BOUNDS)
    )
    bacc_years: dict[Level, frozenset[int]] = field(
        default_factory=lambda: {lvl: frozenset(v) for lvl, v in DEFAULT_BACC_YEARS.items()}
    )
    allowed_nationalities: frozenset[str] | None = frozenset({"Malagasy"})
    require_enrolled: bool = True
    require_passed: bool = True
    forbid_employed: bool = True

    def __post_init__(self):
        for level, (lo, hi) in self.age_bounds.items():
            if lo > hi:
                raise ConfigError(f"age bounds for {level.value} invert: min {lo} > max {hi}")


@dataclass(frozen=True)
class ScreeningOutcome:
    student_id: str
    verdict: str  # "ELIGIBLE" | "REJECTED"
    failed_rules: tuple[RuleId, ...]

    def __post_init__(self):
        if (self.verdict == "REJECTED") != bool(self.failed_rules):
            raise DomainError(
                f"{self.student_id}: verdict {self.verdict} inconsistent with "
                f"{len(self.failed_rules)} failed rules"
            )


@dataclass(frozen=True)
class ScreeningCounts:
    received: int
    eligible: int
    rejected: int


@dataclass(frozen=True)
class ScreeningResult:
    """Per-cohort screening: outcomes in input order plus the derived partition."""

    outcomes: tuple[ScreeningOutcome, ...]
    eligible_ids: tuple[str, ...]
    rejected: tuple[ScreeningOutcome, ...]
    counts: ScreeningCounts


def screen_application(app: StudentApplication, rules: EligibilityRuleSet) -> ScreeningOutcome:
    """Evaluate all six basic rules; the failure list is complete, never truncated."""
    if app.level not in rules.age_bounds:
        raise ConfigError(f"no age bounds configured for level {app.level.value}")
    if app.level not in rules.bacc_years:
        raise ConfigError(f"no baccalaureate years configured for level {app.level.value}")

    failed: list[RuleId] = []
    lo, hi = rules.age_bounds[app.level]
    if not (lo <= app.age <= hi):
        failed.append(RuleId.AGE)
    if app.bacc_year not in rules.bacc_years[app.level]:
        failed.append(RuleId.BACC_YEAR)
    if rules.require_enrolled and not app.enrolled:
        failed.append(RuleId.ADMINISTRATIVE_REGISTRATION)
    if rules.require_passed and not app.passed_exam:
        failed.append(RuleId.EXAMINATION_RESULT)
    if rules.allowed_nationalities is not None and app.nationality not in rules.allowed_nationalities:
        failed.append(RuleId.NATIONALITY)
    if rules.forbid_employed and app.employed:
        failed.append(RuleId.PROFESSIONAL_SITUATION)

    verdict = "REJECTED" if failed else "ELIGIBLE"
    return ScreeningOutcome(student_id=app.student_id, verdict=verdict, failed_rules=tuple(failed))


def screen_cohort(cohort: Cohort, rules: EligibilityRuleSet) -> ScreeningResult:
    """Screen every application; eligible ids keep their input order."""
    if not cohort.applications:
        raise DomainError(f"cohort {cohort.key} has no applications")
    outcomes = []
    for app in cohort.applications:
        try:
            outcomes.append(screen_application(app, rules))
        except ConfigError:
            raise
        except DomainError as exc:
            raise DomainError(f"{app.student_id}: {exc}") from exc
    eligible = tuple(o.student_id for o in outcomes if o.verdict == "ELIGIBLE")
    rejected = tuple(o for o in outcomes if o.verdict == "REJECTED")
    counts = ScreeningCounts(
        received=len(outcomes), eligible=len(eligible), rejected=len(rejected)
    )
    return ScreeningResult(
        outcomes=tuple(outcomes), eligible_ids=eligible, rejected=rejected, counts=counts
    )
