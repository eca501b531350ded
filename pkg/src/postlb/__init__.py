# SPDX-License-Identifier: Apache-2.0
"""
postlb: Post machine emulation and the branch lower bound for conjunction
satisfiability.
"""

__version__ = "0.1.0"

from postlb.attack import (
    ApplicabilityFailure,
    BudgetViolation,
    CorrectnessViolation,
    CrossedCounterexample,
    DecisionMode,
    Objective,
    StepCapViolation,
    attack,
)
from postlb.boolean import (
    FormulaStyle,
    TruthTable,
    full_representation,
    parse_formula,
    sat_conj,
    to_text,
)
from postlb.convention import BipartiteInput, Convention, Verdict, layout
from postlb.errors import PostLBError
from postlb.machine import Program, RunStatus, parse_program, run
from postlb.paths import enumerate_paths, verify_lemma1

__all__ = [
    "__version__",
    # Machine
    "Program",
    "RunStatus",
    "parse_program",
    "run",
    # Conventions
    "BipartiteInput",
    "Convention",
    "Verdict",
    "layout",
    # Paths
    "enumerate_paths",
    "verify_lemma1",
    # Boolean functions
    "FormulaStyle",
    "TruthTable",
    "full_representation",
    "parse_formula",
    "sat_conj",
    "to_text",
    # Adversary
    "ApplicabilityFailure",
    "BudgetViolation",
    "CorrectnessViolation",
    "CrossedCounterexample",
    "DecisionMode",
    "Objective",
    "StepCapViolation",
    "attack",
    # Errors
    "PostLBError",
]
