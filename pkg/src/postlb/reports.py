# SPDX-License-Identifier: Apache-2.0
"""
Conversion of domain results into the report models of ``postlb.protocol``.
"""

import logging

from postlb.attack import AttackOutcome, CrossedCounterexample, Lemma2Summary, path_bound
from postlb.boolean import to_text
from postlb.convention import Convention, Verdict, read_verdict
from postlb.errors import PostLBError
from postlb.machine import (
    DEFAULT_STEP_CAP,
    Instruction,
    MachineState,
    Opcode,
    Program,
    RunResult,
    SymbolSpace,
    run,
)
from postlb.paths import PathSet, enumerate_levels
from postlb.protocol import (
    AttackReport,
    Error,
    ErrorResponse,
    Lemma1Level,
    Lemma2Report,
    PathListing,
    PathsReport,
    ReduceReport,
    RunReport,
    TraceEntry,
    TraceReport,
)
from postlb.reduction import CnfFormula, ReductionMap, fresh_variables

logger = logging.getLogger(__name__)


def error_response(exc: PostLBError) -> ErrorResponse:
    return ErrorResponse(error=Error(type=exc.error_type, message=str(exc)))


def run_report(result: RunResult, conv: Convention, include_trace: bool = False) -> RunReport:
    verdict = read_verdict(conv, result.final_state.space) if result.halted else Verdict.UNDECIDED
    return RunReport(
        status=result.status.value,
        steps=result.steps,
        branches=result.branches,
        final_head=result.final_state.head,
        verdict=verdict.value,
        violation_step=result.violation_step,
        trace=list(result.trace) if include_trace else [],
        marked=sorted(result.final_state.space.marked),
    )


def trace_report(
    program: Program,
    space: SymbolSpace,
    initial_head: int,
    step_cap: int = DEFAULT_STEP_CAP,
) -> TraceReport:
    """Step through a run, recording one entry per executed instruction."""
    entries: list[TraceEntry] = []

    def record(instr: Instruction, head_before: int, state: MachineState) -> None:
        branch_taken = None
        if instr.opcode is Opcode.BRANCH:
            branch_taken = "marked" if state.space.is_marked(head_before) else "blank"
        entries.append(
            TraceEntry(
                step=state.steps_executed,
                address=instr.address,
                opcode=instr.opcode.value,
                head_before=head_before,
                head_after=state.head,
                branch_taken=branch_taken,
                marked_after=sorted(state.space.marked),
            )
        )

    result = run(program, space, initial_head, step_cap, on_step=record)
    return TraceReport(
        status=result.status.value, entries=entries, violation_step=result.violation_step
    )


def _listing(level: PathSet) -> PathListing:
    return PathListing(
        m=level.budget,
        terminated=[list(p.addresses) for p in level.terminated],
        open=[list(p.addresses) for p in level.open],
    )


def paths_report(program: Program, m_max: int, with_listing: bool = False) -> PathsReport:
    path_sets = enumerate_levels(program, m_max)
    levels = [
        Lemma1Level(
            m=level.budget,
            terminated_count=len(level.terminated),
            open_count=len(level.open),
            bound=level.bound,
            holds=level.holds,
        )
        for level in path_sets
    ]
    listings = [_listing(level) for level in path_sets] if with_listing else None
    return PathsReport(
        program_size=len(program),
        m_max=m_max,
        holds=all(level.holds for level in levels),
        levels=levels,
        listings=listings,
    )


def attack_report(outcome: AttackOutcome, n: int, mode: str, objective: str) -> AttackReport:
    budget = 2**n - 1
    if isinstance(outcome, CrossedCounterexample):
        crossed = outcome.crossed_run
        return AttackReport(
            kind=outcome.kind,
            n=n,
            mode=mode,
            objective=objective,
            function_indices=[outcome.g.index, outcome.h.index],
            path=list(outcome.shared_path.addresses),
            inputs={"first": crossed.input.first, "second": crossed.input.second},
            machine_verdict=outcome.machine_verdict.value,
            oracle_verdict=crossed.expected_verdict.value,
            witness_assignment=outcome.oracle_witness.as_dict(),
            distinguishing_assignment=outcome.distinguishing.as_dict(),
            branches=crossed.result.branches,
            budget=budget,
            distinct_paths=outcome.distinct_paths,
            path_bound=path_bound(n),
        )

    record = outcome.record
    witness = record.oracle.witness
    return AttackReport(
        kind=outcome.kind,
        n=n,
        mode=mode,
        objective=objective,
        function_indices=[record.function_index],
        path=list(record.path.addresses),
        inputs={"first": record.input.first, "second": record.input.second},
        machine_verdict=record.verdict.value,
        oracle_verdict=record.expected_verdict.value,
        witness_assignment=witness.as_dict() if witness is not None else None,
        branches=record.result.branches,
        budget=budget,
    )


def reduce_report(original: CnfFormula, image: CnfFormula, rmap: ReductionMap) -> ReduceReport:
    return ReduceReport(
        input_clauses=len(original.clauses),
        output_clauses=len(image.clauses),
        original_variables=len(original.variables()),
        fresh_variables=sorted(fresh_variables(image, rmap)),
        formula=to_text(image.to_formula()),
    )


def lemma2_report(summary: Lemma2Summary, seed: int, step_cap: int) -> Lemma2Report:
    return Lemma2Report(
        trials=summary.trials,
        seed=seed,
        step_cap=step_cap,
        antecedent_held=summary.antecedent_held,
        holds=summary.holds,
        counter_witnesses=summary.counter_witnesses,
    )
