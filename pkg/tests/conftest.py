"""Shared fixtures: packaged example cohorts, default config, pipeline runs."""

from __future__ import annotations

import pytest

from housing_dss import (
    Cohort,
    Level,
    StudentApplication,
    default_config,
    load_applications,
    packaged_data,
    run_pipeline,
)

FIXED_TS = "2026-01-05T09:30:00Z"

_APP_DEFAULTS = dict(
    student_id="S01",
    mention="Computer science",
    level=Level.L1,
    age=18,
    employed=False,
    bacc_year=2017,
    nationality="Malagasy",
    enrolled=True,
    passed_exam=True,
    cp=5.0,
    op=0.0,
    ltp=0.0,
    ec=1,
    dd=100.0,
)


def make_app(**overrides) -> StudentApplication:
    """A fully eligible L1 application, with selected fields overridden."""
    return StudentApplication(**{**_APP_DEFAULTS, **overrides})


def make_cohort(*apps: StudentApplication, **cohort_kwargs) -> Cohort:
    mention = cohort_kwargs.pop("mention", apps[0].mention)
    level = cohort_kwargs.pop("level", apps[0].level)
    return Cohort(mention=mention, level=level, applications=tuple(apps), **cohort_kwargs)

_ACCEPTANCE_LINES: list[str] = []


def record_acceptance(name: str, ok: bool, detail: str) -> None:
    """Queue one pass/fail line for the end-of-run acceptance summary."""
    _ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def _single_cohort(resource: str):
    cohorts = load_applications(packaged_data(resource))
    assert len(cohorts) == 1
    return cohorts[0]


@pytest.fixture(scope="session")
def config():
    return default_config()


@pytest.fixture(scope="session")
def cs_cohort():
    return _single_cohort("applications_computer_science.csv")


@pytest.fixture(scope="session")
def law_cohort():
    return _single_cohort("applications_law.csv")


@pytest.fixture(scope="session")
def cs_bundle(cs_cohort, config):
    return run_pipeline(cs_cohort, config, generated_at=FIXED_TS)


@pytest.fixture(scope="session")
def law_bundle(law_cohort, config):
    return run_pipeline(law_cohort, config, generated_at=FIXED_TS)
