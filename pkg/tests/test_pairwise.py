"""Pairwise comparison matrices: construction, priorities, consistency."""

import numpy as np
import pytest

import housing_dss.pairwise as pairwise_module
from housing_dss import (
    CR_THRESHOLD,
    RANDOM_INDEX,
    DomainError,
    NumericError,
    PairwiseMatrix,
    PriorityAlgorithm,
    WeightVector,
    consistency,
    priority_vector,
    saaty_scale_check,
)
from reference_data import (
    CRITERIA,
    DISPLAY_CI,
    DISPLAY_CR,
    DISPLAY_LAMBDA_MAX,
    DISPLAY_RECIPROCAL_TOL,
    DISPLAY_WEIGHTS,
    CI_TOL,
    CR_TOL,
    JUDGMENT_ROWS_DISPLAY,
    JUDGMENT_UPPER,
    LAMBDA_TOL,
    ORACLE_EXACT_CR,
    ORACLE_EXACT_LAMBDA_MAX,
    ORACLE_EXACT_WEIGHTS,
    ORACLE_PERTURBED_CP_DD_9_CR,
    ORACLE_PERTURBED_EC_LTP_6_CR,
    ORACLE_TOL,
    WEIGHTS_TOL,
)

SAATY_VALUES = [float(k) for k in range(1, 10)] + [1.0 / k for k in range(2, 10)]


def eig_principal(entries: np.ndarray) -> tuple[float, np.ndarray]:
    """Independent oracle: principal eigenpair via numpy's general solver."""
    values, vectors = np.linalg.eig(np.asarray(entries, dtype=float))
    k = int(np.argmax(values.real))
    vec = np.abs(vectors[:, k].real)
    return float(values[k].real), vec / vec.sum()


def ratio_matrix(weights) -> PairwiseMatrix:
    """Perfectly consistent matrix a_ij = w_i / w_j."""
    weights = np.asarray(weights, dtype=float)
    labels = tuple(f"c{i}" for i in range(len(weights)))
    return PairwiseMatrix(labels=labels, entries=weights[:, None] / weights[None, :])


def random_saaty_matrix(rng: np.random.Generator, n: int) -> PairwiseMatrix:
    entries = np.eye(n)
    for i in range(n):
        for j in range(i + 1, n):
            v = float(rng.choice(SAATY_VALUES))
            entries[i, j] = v
            entries[j, i] = 1.0 / v
    return PairwiseMatrix(labels=tuple(f"c{i}" for i in range(n)), entries=entries)


def exact_judgment_matrix(overrides: dict | None = None) -> PairwiseMatrix:
    judgments = dict(JUDGMENT_UPPER)
    if overrides:
        judgments.update(overrides)
    return PairwiseMatrix.from_upper_triangle(CRITERIA, judgments)


class TestPairwiseMatrixConstruction:
    def test_from_upper_triangle_exact_reciprocals(self):
        m = exact_judgment_matrix()
        i, j = m.labels.index("CP"), m.labels.index("DD")
        assert m.entries[i, j] == 3.0
        assert m.entries[j, i] == 1.0 / 3.0
        assert np.all(np.diag(m.entries) == 1.0)

    def test_from_upper_triangle_accepts_either_orientation(self):
        m = PairwiseMatrix.from_upper_triangle(("a", "b"), {("b", "a"): 0.25})
        assert m.entries[0, 1] == 4.0

    def test_duplicate_pair_rejected(self):
        with pytest.raises(DomainError, match="duplicate judgment"):
            PairwiseMatrix.from_upper_triangle(("a", "b"), {("a", "b"): 2, ("b", "a"): 0.5})

    def test_self_comparison_rejected(self):
        with pytest.raises(DomainError, match="self-comparison"):
            PairwiseMatrix.from_upper_triangle(("a", "b"), {("a", "a"): 1, ("a", "b"): 2})

    def test_unknown_label_rejected(self):
        with pytest.raises(DomainError, match="unknown label"):
            PairwiseMatrix.from_upper_triangle(("a", "b"), {("a", "z"): 2})

    def test_incomplete_judgments_rejected(self):
        with pytest.raises(DomainError, match="incomplete judgments: 2 pair"):
            PairwiseMatrix.from_upper_triangle(("a", "b", "c"), {("a", "b"): 2})

    def test_non_positive_judgment_rejected(self):
        with pytest.raises(DomainError, match="must be positive"):
            PairwiseMatrix.from_upper_triangle(("a", "b"), {("a", "b"): 0.0})

    def test_diagonal_must_be_one(self):
        with pytest.raises(DomainError, match="diagonal"):
            PairwiseMatrix.from_rows(("a", "b"), [[2.0, 2.0], [0.5, 1.0]])

    def test_entries_must_be_positive_finite(self):
        with pytest.raises(DomainError, match="positive and finite"):
            PairwiseMatrix.from_rows(("a", "b"), [[1.0, -2.0], [-0.5, 1.0]])
        with pytest.raises(DomainError, match="positive and finite"):
            PairwiseMatrix.from_rows(("a", "b"), [[1.0, np.inf], [0.0, 1.0]])

    def test_reciprocity_enforced_at_default_tolerance(self):
        with pytest.raises(DomainError, match="reciprocity"):
            PairwiseMatrix.from_rows(("a", "b"), [[1.0, 3.0], [0.33, 1.0]])

    def test_widened_tolerance_accepts_rounded_transcription(self):
        m = PairwiseMatrix.from_rows(
            CRITERIA, JUDGMENT_ROWS_DISPLAY, reciprocal_tol=DISPLAY_RECIPROCAL_TOL
        )
        assert m.n == 5
        with pytest.raises(DomainError, match="reciprocity"):
            PairwiseMatrix.from_rows(CRITERIA, JUDGMENT_ROWS_DISPLAY)

    def test_duplicate_labels_rejected(self):
        with pytest.raises(DomainError, match="duplicate labels"):
            PairwiseMatrix.from_rows(("a", "a"), [[1.0, 1.0], [1.0, 1.0]])

    def test_shape_checked(self):
        with pytest.raises(DomainError, match="expected 2x2"):
            PairwiseMatrix.from_rows(("a", "b"), np.ones((3, 3)))

    def test_entries_read_only(self):
        m = exact_judgment_matrix()
        with pytest.raises(ValueError):
            m.entries[0, 1] = 9.0


class TestSaatyScaleCheck:
    @pytest.mark.parametrize("value", [1, 3, 9, 0.5, 1 / 7, 1 / 9, 2.0, 1 / 3])
    def test_legal_values(self, value):
        assert saaty_scale_check(value) is True

    @pytest.mark.parametrize("value", [2.5, 0.0, -3.0, 10.0, 0.4, float("inf"), float("nan")])
    def test_illegal_values(self, value):
        assert saaty_scale_check(value) is False


class TestWeightVector:
    def test_must_sum_to_one(self):
        with pytest.raises(DomainError, match="sum to 1"):
            WeightVector(("a", "b"), np.array([0.7, 0.7]))

    def test_non_negative(self):
        with pytest.raises(DomainError, match="non-negative"):
            WeightVector(("a", "b"), np.array([1.5, -0.5]))

    def test_length_matches_labels(self):
        with pytest.raises(DomainError, match="length"):
            WeightVector(("a", "b"), np.array([1.0]))

    def test_from_raw_normalizes(self):
        w = WeightVector.from_raw(("a", "b", "c"), [2.0, 1.0, 1.0])
        assert w.as_dict() == {"a": 0.5, "b": 0.25, "c": 0.25}

    def test_from_raw_rejects_zero_sum_and_negative(self):
        with pytest.raises(DomainError, match="positive sum"):
            WeightVector.from_raw(("a", "b"), [0.0, 0.0])
        with pytest.raises(DomainError, match="non-negative"):
            WeightVector.from_raw(("a", "b"), [-1.0, 2.0])

    def test_getitem(self):
        w = WeightVector.from_raw(("a", "b"), [3.0, 1.0])
        assert w["a"] == 0.75
        with pytest.raises(DomainError, match="unknown label"):
            w["z"]

    def test_values_read_only(self):
        w = WeightVector.from_raw(("a", "b"), [1.0, 1.0])
        with pytest.raises(ValueError):
            w.values[0] = 0.9


class TestPriorityVector:
    def test_all_ones_matrix_gives_uniform_weights(self):
        m = PairwiseMatrix.from_rows(tuple("abcd"), np.ones((4, 4)))
        for algorithm in PriorityAlgorithm:
            w = priority_vector(m, algorithm)
            assert np.allclose(w.values, 0.25, atol=1e-12)

    def test_recovers_known_weights(self):
        m = ratio_matrix([0.5, 0.3, 0.2])
        for algorithm in PriorityAlgorithm:
            w = priority_vector(m, algorithm)
            assert np.allclose(w.values, [0.5, 0.3, 0.2], atol=1e-6)

    def test_two_by_two(self):
        m = PairwiseMatrix.from_rows(("a", "b"), [[1.0, 4.0], [0.25, 1.0]])
        for algorithm in PriorityAlgorithm:
            w = priority_vector(m, algorithm)
            assert np.allclose(w.values, [0.8, 0.2], atol=1e-10)

    def test_needs_two_items(self):
        m = PairwiseMatrix.from_rows(("a",), [[1.0]])
        with pytest.raises(DomainError, match="at least a 2x2"):
            priority_vector(m)

    def test_judgment_matrix_against_eig_oracle(self):
        m = exact_judgment_matrix()
        _, expected = eig_principal(m.entries)
        w = priority_vector(m)
        assert np.allclose(w.values, expected, atol=1e-8)
        assert np.allclose(w.values, ORACLE_EXACT_WEIGHTS, atol=ORACLE_TOL)

    def test_judgment_matrix_reproduces_reference_weights(self):
        for algorithm in PriorityAlgorithm:
            w = priority_vector(exact_judgment_matrix(), algorithm)
            for label, published in DISPLAY_WEIGHTS.items():
                assert w[label] == pytest.approx(published, abs=WEIGHTS_TOL)

    def test_non_convergence_raises(self, monkeypatch):
        monkeypatch.setattr(pairwise_module, "POWER_ITERATION_MAX", 0)
        with pytest.raises(NumericError) as exc_info:
            pairwise_module.priority_vector(exact_judgment_matrix())
        assert exc_info.value.iterations == 0

    def test_consistent_recovery_property(self):
        rng = np.random.default_rng(2024)
        for _ in range(100):
            n = int(rng.integers(3, 8))
            raw = rng.uniform(0.05, 1.0, size=n)
            weights = raw / raw.sum()
            m = ratio_matrix(weights)
            for algorithm in PriorityAlgorithm:
                recovered = priority_vector(m, algorithm)
                assert np.allclose(recovered.values, weights, atol=1e-6)
            report = consistency(m, priority_vector(m))
            assert report.cr < 1e-9
            assert report.lambda_max == pytest.approx(n, abs=1e-9)

    def test_algorithms_agree_on_consistent_matrices(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            weights = rng.uniform(0.1, 1.0, size=4)
            m = ratio_matrix(weights / weights.sum())
            eig = priority_vector(m, PriorityAlgorithm.EIGENVECTOR)
            geo = priority_vector(m, PriorityAlgorithm.GEOMETRIC_MEAN)
            assert np.allclose(eig.values, geo.values, atol=1e-9)


class TestConsistency:
    def test_consistent_matrix_zero_ci_cr(self):
        m = ratio_matrix([0.5, 0.3, 0.2])
        report = consistency(m, priority_vector(m))
        assert report.lambda_max == pytest.approx(3.0, abs=1e-9)
        assert report.ci == pytest.approx(0.0, abs=1e-9)
        assert report.cr == pytest.approx(0.0, abs=1e-9)
        assert report.consistent is True

    def test_two_by_two_always_consistent(self):
        m = PairwiseMatrix.from_rows(("a", "b"), [[1.0, 5.0], [0.2, 1.0]])
        report = consistency(m, priority_vector(m))
        assert report.ri == 0.0
        assert report.cr == 0.0
        assert report.consistent is True

    def test_lambda_max_at_least_n_property(self):
        rng = np.random.default_rng(303)
        for _ in range(100):
            n = int(rng.integers(3, 8))
            m = random_saaty_matrix(rng, n)
            report = consistency(m, priority_vector(m))
            assert report.lambda_max >= n - 1e-9
            assert report.ci >= -1e-12

    def test_zero_weight_raises(self):
        m = PairwiseMatrix.from_rows(("a", "b"), [[1.0, 5.0], [0.2, 1.0]])
        w = WeightVector(("a", "b"), np.array([0.0, 1.0]))
        with pytest.raises(NumericError, match="undefined"):
            consistency(m, w)

    def test_label_mismatch_raises(self):
        m = PairwiseMatrix.from_rows(("a", "b"), [[1.0, 2.0], [0.5, 1.0]])
        w = WeightVector.from_raw(("x", "y"), [1.0, 1.0])
        with pytest.raises(DomainError, match="labels"):
            consistency(m, w)

    def test_random_index_fallback_above_table(self):
        rng = np.random.default_rng(5)
        weights = rng.uniform(0.2, 1.0, size=12)
        m = ratio_matrix(weights / weights.sum())
        report = consistency(m, priority_vector(m))
        assert report.ri == RANDOM_INDEX[10]

    def test_judgment_matrix_consistency_against_eig_oracle(self):
        m = exact_judgment_matrix()
        lambda_oracle, _ = eig_principal(m.entries)
        report = consistency(m, priority_vector(m))
        assert report.lambda_max == pytest.approx(lambda_oracle, abs=1e-8)
        assert report.lambda_max == pytest.approx(ORACLE_EXACT_LAMBDA_MAX, abs=ORACLE_TOL)
        assert report.cr == pytest.approx(ORACLE_EXACT_CR, abs=ORACLE_TOL)
        assert report.consistent is True

    def test_display_rounded_reproduction(self):
        m = PairwiseMatrix.from_rows(
            CRITERIA, JUDGMENT_ROWS_DISPLAY, reciprocal_tol=DISPLAY_RECIPROCAL_TOL
        )
        w = WeightVector.from_raw(CRITERIA, [DISPLAY_WEIGHTS[c] for c in CRITERIA])
        report = consistency(m, w)
        assert report.lambda_max == pytest.approx(DISPLAY_LAMBDA_MAX, abs=LAMBDA_TOL)
        assert report.ci == pytest.approx(DISPLAY_CI, abs=CI_TOL)
        assert report.cr == pytest.approx(DISPLAY_CR, abs=CR_TOL)
        assert report.consistent is True

    def test_single_judgment_perturbations(self):
        stays = exact_judgment_matrix({("CP", "DD"): 9.0})
        report = consistency(stays, priority_vector(stays))
        assert report.cr == pytest.approx(ORACLE_PERTURBED_CP_DD_9_CR, abs=ORACLE_TOL)
        assert report.consistent is True

        crosses = exact_judgment_matrix({("EC", "LTP"): 6.0})
        report = consistency(crosses, priority_vector(crosses))
        assert report.cr == pytest.approx(ORACLE_PERTURBED_EC_LTP_6_CR, abs=ORACLE_TOL)
        assert report.cr > CR_THRESHOLD
        assert report.consistent is False

    def test_as_dict_round_trips_fields(self):
        m = exact_judgment_matrix()
        report = consistency(m, priority_vector(m))
        d = report.as_dict()
        assert set(d) == {"lambda_max", "ci", "cr", "ri", "n", "consistent"}
        assert d["n"] == 5
        assert d["ri"] == RANDOM_INDEX[5]
