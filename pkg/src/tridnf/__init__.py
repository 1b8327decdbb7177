"""Learning of low-complexity DNF formulas from partially known 0/1 data.

The package learns a disjunctive normal form that is consistent with every
training instance, including instances with Unknown cells, by ranking
candidate literals with exact fuzzy relevance arithmetic.  See README.md
for the algorithm walk-through, the CLI, and the file formats.
"""

from .constraints import (
    ConstraintGroup,
    ConstraintSet,
    build_constraints,
    build_membership,
    fuzzy_cardinality,
    relevance_i,
    relevance_ij,
    total_relevance,
)
from .datasets import (
    ZooRecord,
    bundled_zoo_path,
    encode_zoo,
    load_ternary_csv,
    load_zoo,
    save_ternary_csv,
)
from .errors import (
    BudgetExceededError,
    CellOutOfRangeError,
    ConsistencyAbort,
    CountWarning,
    EmptyConstraintError,
    FractionOutOfRangeError,
    IterationLimitError,
    LengthMismatchError,
    ParseError,
    SearchBudgetExceededError,
    TridnfError,
)
from .experiments import (
    EvalReport,
    ExperimentReport,
    RunResult,
    SummaryRow,
    evaluate,
    run_experiment,
)
from .formula import DnfFormula, Literal, TernaryTruth, Term, parse_formula
from .learner import LearnerConfig, LearnResult, learn
from .masking import MaskPlan, SplitMix64, apply_mask, make_mask
from .oracle import (
    ConsistencyCertificate,
    Verdict,
    minimal_dnf_exhaustive,
    reference_brain,
    verify_consistency,
)
from .trits import (
    ConsistencyReport,
    Dataset,
    Instance,
    Label,
    Trit,
    check_self_consistency,
    delete_repetitions,
    reduce_uncertainty,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError",
    "CellOutOfRangeError",
    "ConsistencyAbort",
    "ConsistencyCertificate",
    "ConsistencyReport",
    "ConstraintGroup",
    "ConstraintSet",
    "CountWarning",
    "Dataset",
    "DnfFormula",
    "EmptyConstraintError",
    "EvalReport",
    "ExperimentReport",
    "FractionOutOfRangeError",
    "Instance",
    "IterationLimitError",
    "Label",
    "LearnResult",
    "LearnerConfig",
    "LengthMismatchError",
    "Literal",
    "MaskPlan",
    "ParseError",
    "RunResult",
    "SearchBudgetExceededError",
    "SplitMix64",
    "SummaryRow",
    "TernaryTruth",
    "Term",
    "TridnfError",
    "Trit",
    "Verdict",
    "ZooRecord",
    "apply_mask",
    "build_constraints",
    "build_membership",
    "bundled_zoo_path",
    "check_self_consistency",
    "delete_repetitions",
    "encode_zoo",
    "evaluate",
    "fuzzy_cardinality",
    "learn",
    "load_ternary_csv",
    "load_zoo",
    "make_mask",
    "minimal_dnf_exhaustive",
    "parse_formula",
    "reduce_uncertainty",
    "reference_brain",
    "relevance_i",
    "relevance_ij",
    "run_experiment",
    "save_ternary_csv",
    "total_relevance",
    "verify_consistency",
]
