"""Decision support for student housing allocation.

Two-stage process: screen applications against basic eligibility rules,
then rank the eligible students of each cohort with AHP, the weighted sum
model, and PROMETHEE II under AHP-derived criterion weights; compare the
rankings and allocate the available housing units.
"""

from .domain import (
    DEFAULT_REF_MAX,
    SOCIAL_CRITERION_ORDER,
    Cohort,
    Criterion,
    CriterionKind,
    DecisionMatrix,
    Direction,
    Level,
    Scale,
    StudentApplication,
    build_decision_matrix,
    normalize_value,
    social_criteria,
)
from .eligibility import (
    DEFAULT_AGE_BOUNDS,
    DEFAULT_BACC_YEARS,
    EligibilityRuleSet,
    RuleId,
    ScreeningCounts,
    ScreeningOutcome,
    ScreeningResult,
    screen_application,
    screen_cohort,
)
from .errors import (
    ConfigError,
    DomainError,
    DuplicateIdError,
    EmptyCohortError,
    HousingDssError,
    InconsistentJudgmentsError,
    IntegrityError,
    NumericError,
    ParseError,
    UnknownIdError,
)
from .methods import (
    USUAL,
    FlowTable,
    Method,
    PreferenceFunction,
    PreferenceShape,
    ScoreVector,
    ahp_alternative_priorities,
    ahp_scores,
    promethee_rank,
    wsm_scores,
)
from .pairwise import (
    CR_THRESHOLD,
    RANDOM_INDEX,
    ConsistencyReport,
    PairwiseMatrix,
    PriorityAlgorithm,
    WeightVector,
    consistency,
    priority_vector,
    saaty_scale_check,
)
from .persistence import (
    APPLICATIONS_HEADER,
    AppConfig,
    FileFormat,
    ResultBundle,
    default_config,
    dump_applications,
    export_report,
    load_applications,
    load_config,
    load_results,
    packaged_data,
    save_results,
)
from .pipeline import derive_weights, rank_one, run_pipeline
from .ranking import (
    TIE_POLICY_COMPETITION,
    AllocationResult,
    RankEntry,
    RankingResult,
    SimilarityReport,
    aggregate_ranks,
    allocate,
    assign_ranks,
    rank_similarity,
)

__version__ = "0.1.0"

__all__ = [
    "APPLICATIONS_HEADER",
    "AllocationResult",
    "AppConfig",
    "CR_THRESHOLD",
    "Cohort",
    "ConfigError",
    "ConsistencyReport",
    "Criterion",
    "CriterionKind",
    "DEFAULT_AGE_BOUNDS",
    "DEFAULT_BACC_YEARS",
    "DEFAULT_REF_MAX",
    "DecisionMatrix",
    "Direction",
    "DomainError",
    "DuplicateIdError",
    "EligibilityRuleSet",
    "EmptyCohortError",
    "FileFormat",
    "FlowTable",
    "HousingDssError",
    "InconsistentJudgmentsError",
    "IntegrityError",
    "Level",
    "Method",
    "NumericError",
    "PairwiseMatrix",
    "ParseError",
    "PreferenceFunction",
    "PreferenceShape",
    "PriorityAlgorithm",
    "RANDOM_INDEX",
    "RankEntry",
    "RankingResult",
    "ResultBundle",
    "RuleId",
    "SOCIAL_CRITERION_ORDER",
    "Scale",
    "ScoreVector",
    "ScreeningCounts",
    "ScreeningOutcome",
    "ScreeningResult",
    "SimilarityReport",
    "StudentApplication",
    "TIE_POLICY_COMPETITION",
    "USUAL",
    "UnknownIdError",
    "WeightVector",
    "aggregate_ranks",
    "ahp_alternative_priorities",
    "ahp_scores",
    "allocate",
    "assign_ranks",
    "build_decision_matrix",
    "consistency",
    "default_config",
    "derive_weights",
    "dump_applications",
    "export_report",
    "load_applications",
    "load_config",
    "load_results",
    "normalize_value",
    "packaged_data",
    "priority_vector",
    "promethee_rank",
    "rank_one",
    "rank_similarity",
    "run_pipeline",
    "saaty_scale_check",
    "save_results",
    "screen_application",
    "screen_cohort",
    "social_criteria",
    "wsm_scores",
]
