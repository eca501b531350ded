# SPDX-License-Identifier: Apache-2.0
"""
Report models emitted by the CLI.

Every report is a pydantic model serialised with ``model_dump_json(indent=2)``;
field order is declaration order, so identical inputs give identical bytes.
"""

from typing import Literal, Optional

from pydantic import BaseModel, Field


class Error(BaseModel):
    """Error structure written to standard error."""

    type: str
    message: str


class ErrorResponse(BaseModel):
    type: Literal["error"] = "error"
    error: Error


# Runs


class RunReport(BaseModel):
    """Outcome of a single run."""

    status: str
    steps: int
    branches: int
    final_head: int
    verdict: str
    violation_step: Optional[int] = None
    trace: list[int] = Field(default_factory=list)
    marked: list[int] = Field(default_factory=list)


class TraceEntry(BaseModel):
    step: int
    address: int
    opcode: str
    head_before: int
    head_after: int
    branch_taken: Optional[Literal["marked", "blank"]] = None
    marked_after: list[int]


class TraceReport(BaseModel):
    status: str
    entries: list[TraceEntry]
    violation_step: Optional[int] = None


# Paths


class Lemma1Level(BaseModel):
    m: int
    terminated_count: int
    open_count: int
    bound: int
    holds: bool


class PathListing(BaseModel):
    m: int
    terminated: list[list[int]]
    open: list[list[int]]


class PathsReport(BaseModel):
    program_size: int
    m_max: int
    holds: bool
    levels: list[Lemma1Level]
    listings: Optional[list[PathListing]] = None


# Attack


class AttackReport(BaseModel):
    """One adversary outcome.

    ``function_indices`` holds one index for family violations and the
    colliding pair (g, h) for a crossed counterexample.
    """

    kind: str
    n: int
    mode: str
    objective: str
    function_indices: list[int]
    path: list[int]
    inputs: dict[str, str]
    machine_verdict: str
    oracle_verdict: str
    witness_assignment: Optional[dict[str, bool]] = None
    distinguishing_assignment: Optional[dict[str, bool]] = None
    branches: Optional[int] = None
    budget: int
    distinct_paths: Optional[int] = None
    path_bound: Optional[int] = None


# Reduction


class ReduceReport(BaseModel):
    input_clauses: int
    output_clauses: int
    original_variables: int
    fresh_variables: list[int]
    formula: str


# Representations


class GenReprEntry(BaseModel):
    index: int
    table: str
    file: str
    formula: str


class GenReprIndex(BaseModel):
    n: int
    style: str
    count: int
    entries: list[GenReprEntry]


# Lemma 2 probe


class Lemma2Report(BaseModel):
    trials: int
    seed: int
    step_cap: int
    antecedent_held: int
    holds: bool
    counter_witnesses: list[dict[str, str]] = Field(default_factory=list)
