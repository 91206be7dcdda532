"""Domain model: criteria, applications, cohorts, normalization, decision matrix."""

import numpy as np
import pytest

from conftest import make_app, make_cohort
from housing_dss import (
    DEFAULT_REF_MAX,
    SOCIAL_CRITERION_ORDER,
    Cohort,
    Criterion,
    DecisionMatrix,
    DomainError,
    EmptyCohortError,
    Level,
    Scale,
    UnknownIdError,
    build_decision_matrix,
    normalize_value,
    social_criteria,
)
from reference_data import ELIGIBLE_CS_RAW


def by_id(criterion_id: str) -> Criterion:
    return next(c for c in social_criteria() if c.id == criterion_id)


class TestCriterion:
    def test_defaults_are_canonical(self):
        criteria = social_criteria()
        assert tuple(c.id for c in criteria) == SOCIAL_CRITERION_ORDER
        assert {c.id: c.ref_max for c in criteria} == DEFAULT_REF_MAX

    def test_ref_max_override(self):
        criteria = social_criteria({"DD": 200.0})
        assert by_id("DD").ref_max == 1467.0
        assert next(c for c in criteria if c.id == "DD").ref_max == 200.0
        # the others keep their defaults
        assert next(c for c in criteria if c.id == "EC").ref_max == 7.0

    def test_unknown_ref_max_key_rejected(self):
        with pytest.raises(DomainError, match="unknown social criterion"):
            social_criteria({"XX": 3.0})

    def test_non_positive_ref_max_rejected(self):
        for bad in (0.0, -1.0, float("nan"), float("inf")):
            with pytest.raises(DomainError, match="ref_max"):
                Criterion("CP", "Physical capacity", ref_max=bad)

    def test_check_raw_enumerated_domain(self):
        cp = by_id("CP")
        cp.check_raw(5.0)
        cp.check_raw(10.0)
        with pytest.raises(DomainError, match=r"cp must be one of \{5,10\}, got 7"):
            cp.check_raw(7.0)

    def test_check_raw_rejects_negative_and_non_finite(self):
        dd = by_id("DD")
        with pytest.raises(DomainError):
            dd.check_raw(-1.0)
        with pytest.raises(DomainError):
            dd.check_raw(float("inf"))


class TestStudentApplication:
    def test_valid_application(self):
        app = make_app(cp=10.0, op=5.0, ltp=5.0, ec=3, dd=12.5)
        assert app.social_value("CP") == 10.0
        assert app.social_value("DD") == 12.5
        assert app.social_value("EC") == 3.0
        assert app.social_value("LTP") == 5.0
        assert app.social_value("OP") == 5.0

    def test_unknown_social_criterion(self):
        with pytest.raises(UnknownIdError):
            make_app().social_value("AGE")

    @pytest.mark.parametrize(
        ("field_name", "value", "fragment"),
        [
            ("cp", 7.0, "cp must be one of {5,10}, got 7"),
            ("op", 3.0, "op must be one of {0,5,10}"),
            ("ltp", 2.0, "ltp must be one of {0,5}"),
            ("ec", -1, "ec must be a non-negative integer"),
            ("dd", -5.0, "dd must be non-negative"),
            ("dd", float("nan"), "dd must be non-negative"),
            ("age", 0, "age must be positive"),
        ],
    )
    def test_domain_violations_name_the_field(self, field_name, value, fragment):
        with pytest.raises(DomainError, match=None) as exc_info:
            make_app(**{field_name: value})
        assert fragment in str(exc_info.value)
        assert exc_info.value.field == field_name

    def test_empty_student_id_rejected(self):
        with pytest.raises(DomainError, match="student_id"):
            make_app(student_id="")


class TestCohort:
    def test_key_and_student_ids(self):
        cohort = make_cohort(make_app(student_id="A"), make_app(student_id="B"))
        assert cohort.key == ("Computer science", "L1")
        assert cohort.student_ids == ("A", "B")
        assert cohort.application("B").student_id == "B"

    def test_application_unknown_id(self):
        cohort = make_cohort(make_app())
        with pytest.raises(UnknownIdError):
            cohort.application("nope")

    def test_mixed_cohort_rejected(self):
        stray = make_app(student_id="X", mention="Law")
        with pytest.raises(DomainError, match="belongs to"):
            make_cohort(make_app(), stray)

    def test_mixed_level_rejected(self):
        stray = make_app(student_id="X", level=Level.L2, bacc_year=2016)
        with pytest.raises(DomainError, match="belongs to"):
            make_cohort(make_app(), stray, level=Level.L1)

    def test_duplicate_student_id_rejected(self):
        with pytest.raises(DomainError, match="duplicate student_id"):
            make_cohort(make_app(student_id="A"), make_app(student_id="A"))


class TestNormalizeValue:
    def test_linear_mapping(self):
        assert normalize_value(4, by_id("EC")) == pytest.approx(5.714286, abs=1e-5)
        assert normalize_value(923, by_id("DD")) == pytest.approx(6.30, abs=0.02)
        assert normalize_value(10, by_id("CP")) == 10.0
        assert normalize_value(0, by_id("DD")) == 0.0

    def test_clamped_at_ten(self):
        assert normalize_value(9, by_id("EC")) == 10.0
        assert normalize_value(5000, by_id("DD")) == 10.0

    def test_linearity_below_ref_max(self):
        dd = by_id("DD")
        rng = np.random.default_rng(7)
        for _ in range(50):
            x = float(rng.uniform(0, dd.ref_max / 3))
            a = float(rng.uniform(0, 2.5))
            assert normalize_value(a * x, dd) == pytest.approx(
                min(a * normalize_value(x, dd), 10.0), abs=1e-9
            )

    def test_rejects_negative_and_non_finite(self):
        for bad in (-0.1, float("inf"), float("nan")):
            with pytest.raises(DomainError):
                normalize_value(bad, by_id("DD"))


class TestDecisionMatrix:
    def _matrix(self):
        return DecisionMatrix(
            rows=("a", "b"),
            cols=("CP", "DD"),
            values=np.array([[5.0, 1.0], [10.0, 2.0]]),
            scale=Scale.SCALE10,
        )

    def test_accessors(self):
        m = self._matrix()
        assert m.cell("b", "DD") == 2.0
        assert np.array_equal(m.column("CP"), [5.0, 10.0])

    def test_unknown_labels(self):
        m = self._matrix()
        with pytest.raises(UnknownIdError):
            m.cell("z", "CP")
        with pytest.raises(UnknownIdError):
            m.cell("a", "ZZ")
        with pytest.raises(UnknownIdError):
            m.column("ZZ")

    def test_values_are_read_only(self):
        m = self._matrix()
        with pytest.raises(ValueError):
            m.values[0, 0] = 99.0

    def test_shape_mismatch_rejected(self):
        with pytest.raises(DomainError, match="shape"):
            DecisionMatrix(("a",), ("CP", "DD"), np.zeros((2, 2)), Scale.SCALE10)

    def test_duplicate_labels_rejected(self):
        with pytest.raises(DomainError, match="duplicate row"):
            DecisionMatrix(("a", "a"), ("CP",), np.zeros((2, 1)), Scale.SCALE10)
        with pytest.raises(DomainError, match="duplicate column"):
            DecisionMatrix(("a",), ("CP", "CP"), np.zeros((1, 2)), Scale.SCALE10)

    def test_non_finite_entries_rejected(self):
        with pytest.raises(DomainError, match="finite"):
            DecisionMatrix(("a",), ("CP",), np.array([[np.nan]]), Scale.SCALE10)


class TestBuildDecisionMatrix:
    def test_single_student_row(self):
        cohort = make_cohort(make_app(student_id="only", cp=5.0, dd=0.0, ec=0, ltp=0.0, op=0.0))
        m = build_decision_matrix(cohort, ["only"])
        assert m.scale is Scale.SCALE10
        assert np.allclose(m.values, [[5.0, 0.0, 0.0, 0.0, 0.0]])

    def test_identical_students_identical_rows(self):
        cohort = make_cohort(
            make_app(student_id="a", ec=2, dd=300.0),
            make_app(student_id="b", ec=2, dd=300.0),
        )
        m = build_decision_matrix(cohort, ["a", "b"])
        assert np.array_equal(m.values[0], m.values[1])

    def test_row_order_follows_eligible_ids(self):
        cohort = make_cohort(make_app(student_id="a", ec=1), make_app(student_id="b", ec=2))
        m = build_decision_matrix(cohort, ["b", "a"])
        assert m.rows == ("b", "a")
        assert m.cell("b", "EC") > m.cell("a", "EC")

    def test_empty_eligible_list(self):
        cohort = make_cohort(make_app())
        with pytest.raises(EmptyCohortError):
            build_decision_matrix(cohort, [])

    def test_unknown_eligible_id(self):
        cohort = make_cohort(make_app())
        with pytest.raises(UnknownIdError):
            build_decision_matrix(cohort, ["ghost"])

    def test_pure_function(self, cs_cohort, cs_bundle):
        eligible = cs_bundle.screening.eligible_ids
        first = build_decision_matrix(cs_cohort, eligible)
        second = build_decision_matrix(cs_cohort, eligible)
        assert np.array_equal(first.values, second.values)
        assert first.rows == second.rows

    def test_fixture_raw_values_match_reference(self, cs_cohort):
        for student_id, (cp, dd, ec, ltp, op) in ELIGIBLE_CS_RAW.items():
            app = cs_cohort.application(student_id)
            assert (app.cp, app.dd, app.ec, app.ltp, app.op) == (cp, dd, ec, ltp, op)
