# SPDX-License-Identifier: Apache-2.0
"""
The fooling-family adversary against conjunction-satisfiability deciders.

For every n-variable function f the machine is run on the bipartite input
(phi_f, phi_not_f). Each of those conjunctions is unsatisfiable, so a
correct machine must reject all 2**(2**n) of them. If it does so within
2**n - 1 branches, at most 2**(2**n - 1) terminated paths are available,
so two runs g != h share a path. Crossing their parts gives
(phi_g, phi_not_h) and (phi_h, phi_not_g), which follow the same path and
therefore also reject, yet at an assignment where g and h differ one of
the two crossed conjunctions is satisfiable.

``attack`` always returns an outcome: either the machine already fails on
the family (wrong answer, too many branches, no halt) or the crossed
counterexample. Every outcome is re-verified by re-simulation and an
independent brute-force evaluation before it is returned.
"""

import logging
import random
from collections.abc import Iterator
from dataclasses import dataclass, field
from enum import StrEnum
from itertools import product
from typing import ClassVar, Optional, Union

from postlb.boolean import (
    Assignment,
    Formula,
    FormulaSet,
    SatResult,
    TruthTable,
    distinguishing_assignment,
    evaluate,
    negate,
    sat_conj,
    scope,
)
from postlb.convention import (
    BipartiteInput,
    Convention,
    Verdict,
    layout,
    read_verdict,
)
from postlb.encoding import encode_formula
from postlb.errors import (
    ArityError,
    FamilyNotCleanError,
    InternalConsistencyError,
    Lemma2ViolationError,
    PigeonholeError,
    ReductionError,
    VerificationError,
)
from postlb.machine import DEFAULT_STEP_CAP, Program, RunResult, RunStatus, run
from postlb.paths import Path, PathKind, path_of
from postlb.reduction import CnfFormula, ReductionMap, dualize, falsify_disj, to_3cnf
from postlb.utils.generators import random_convention, random_parts, random_program

logger = logging.getLogger(__name__)

MAX_DESK_ARITY = 3
MAX_OVERRIDE_ARITY = 4


class DecisionMode(StrEnum):
    PLAIN = "plain"
    REDUCED = "3cnf"


class Objective(StrEnum):
    SAT_CONJUNCTION = "sat-and"
    FALSIFY_DISJUNCTION = "falsify-or"


def branch_budget(n: int) -> int:
    return 2**n - 1


def check_arity(n: int, allow_large: bool = False) -> None:
    """n in 1..3 always, n = 4 only with ``allow_large``, nothing larger."""
    if n < 1 or n > MAX_OVERRIDE_ARITY:
        raise ArityError(f"n must be between 1 and {MAX_OVERRIDE_ARITY}, got {n}")
    if n > MAX_DESK_ARITY and not allow_large:
        raise ArityError(f"n={n} means {2 ** 2 ** n} runs; pass allow_large to permit it")


def path_bound(n: int) -> int:
    """Terminated paths available to runs within the branch budget."""
    return 2 ** branch_budget(n)


@dataclass(frozen=True)
class RunRecord:
    """One run on (phi_function, phi_not_partner).

    Family members have ``partner_index == function_index``; crossed runs
    pair two different functions.
    """

    function_index: int
    partner_index: int
    input: BipartiteInput
    result: RunResult
    verdict: Verdict
    path: Path
    oracle: SatResult

    @property
    def expected_verdict(self) -> Verdict:
        return Verdict.ACCEPT if self.oracle.satisfiable else Verdict.REJECT


@dataclass
class RunFamily:
    n: int
    budget: int
    expected_size: int
    step_cap: int
    records: list[RunRecord] = field(default_factory=list)

    def distinct_paths(self) -> int:
        return len({r.path.addresses for r in self.records if r.path.terminated})


@dataclass(frozen=True)
class CorrectnessViolation:
    kind: ClassVar[str] = "correctness_violation"
    record: RunRecord
    oracle_answer: SatResult


@dataclass(frozen=True)
class BudgetViolation:
    kind: ClassVar[str] = "budget_violation"
    record: RunRecord
    budget: int


@dataclass(frozen=True)
class StepCapViolation:
    kind: ClassVar[str] = "step_cap_violation"
    record: RunRecord
    step_cap: int


@dataclass(frozen=True)
class ApplicabilityFailure:
    kind: ClassVar[str] = "applicability_failure"
    record: RunRecord


@dataclass(frozen=True)
class CrossedCounterexample:
    kind: ClassVar[str] = "crossed_counterexample"
    g: TruthTable
    h: TruthTable
    shared_path: Path
    crossed_run: RunRecord
    other_crossed_run: RunRecord
    oracle_witness: Assignment
    distinguishing: Assignment
    machine_verdict: Verdict
    distinct_paths: int


Violation = Union[CorrectnessViolation, BudgetViolation, StepCapViolation, ApplicabilityFailure]
AttackOutcome = Union[Violation, CrossedCounterexample]


class FoolingHarness:
    """Builds and runs inputs for one machine under one configuration."""

    def __init__(
        self,
        machine: Program,
        conv: Convention,
        n: int,
        repr: FormulaSet,
        mode: DecisionMode = DecisionMode.PLAIN,
        step_cap: int = DEFAULT_STEP_CAP,
        objective: Objective = Objective.SAT_CONJUNCTION,
        rmap: Optional[ReductionMap] = None,
        allow_large: bool = False,
    ):
        check_arity(n, allow_large)
        if n > MAX_DESK_ARITY:
            logger.warning("Running an n=%d family of %d runs", n, 2 ** 2**n)
        if repr.arity != n or not repr.full:
            raise ArityError(f"representation must be full for n={n}")
        if mode is DecisionMode.REDUCED and objective is Objective.FALSIFY_DISJUNCTION:
            raise ReductionError("the 3CNF reduction only applies to the sat-and objective")

        self.machine = machine
        self.conv = conv
        self.n = n
        self.repr = repr
        self.mode = mode
        self.step_cap = step_cap
        self.objective = objective
        self.budget = branch_budget(n)

        self._cnf: dict[TruthTable, CnfFormula] = {}
        self.rmap = rmap
        if mode is DecisionMode.REDUCED:
            self._cnf = {t: CnfFormula.from_formula(f) for t, f in repr.members.items()}
            if self.rmap is None:
                self.rmap = ReductionMap.covering(self._cnf.values(), n)
        self._conjuncts: dict[tuple[int, int], Formula] = {}
        self._boxes: dict[tuple[int, int], str] = {}

    def conjunct(self, table: TruthTable, position: int) -> Formula:
        """Formula placed in partition ``position`` (0 first, 1 second) for ``table``."""
        key = (table.index, position)
        formula = self._conjuncts.get(key)
        if formula is None:
            if self.mode is DecisionMode.REDUCED:
                assert self.rmap is not None
                formula = to_3cnf(self._cnf[table], self.rmap, position).to_formula()
            else:
                formula = self.repr[table]
            self._conjuncts[key] = formula
        return formula

    def boxes(self, table: TruthTable, position: int) -> str:
        key = (table.index, position)
        encoded = self._boxes.get(key)
        if encoded is None:
            encoded = self._boxes[key] = encode_formula(self.conjunct(table, position))
        return encoded

    def decide(self, f1: Formula, f2: Formula) -> SatResult:
        width = scope(f1, f2, minimum=self.n)
        if self.objective is Objective.FALSIFY_DISJUNCTION:
            return falsify_disj(f1, f2, width)
        return sat_conj(f1, f2, width)

    def execute(self, inp: BipartiteInput) -> tuple[RunResult, Path, Verdict]:
        space = layout(inp, self.conv)
        result = run(self.machine, space, self.conv.initial_head, self.step_cap)
        path = path_of(result.trace, self.machine) if result.trace else Path((), PathKind.OPEN, 0)
        verdict = (
            read_verdict(self.conv, result.final_state.space)
            if result.halted
            else Verdict.UNDECIDED
        )
        return result, path, verdict

    def record(self, function: TruthTable, partner: TruthTable) -> RunRecord:
        """Run on (phi_function, phi_not_partner)."""
        negated = negate(partner)
        inp = BipartiteInput(first=self.boxes(function, 0), second=self.boxes(negated, 1))
        result, path, verdict = self.execute(inp)
        return RunRecord(
            function_index=function.index,
            partner_index=partner.index,
            input=inp,
            result=result,
            verdict=verdict,
            path=path,
            oracle=self.decide(self.conjunct(function, 0), self.conjunct(negated, 1)),
        )

    def iter_family(self) -> Iterator[RunRecord]:
        for table in self.repr.tables():
            yield self.record(table, table)

    def table(self, index: int) -> TruthTable:
        return TruthTable.from_index(index, self.n)

    def new_family(self) -> RunFamily:
        return RunFamily(
            n=self.n,
            budget=self.budget,
            expected_size=1 << (1 << self.n),
            step_cap=self.step_cap,
        )


def scan_record(record: RunRecord, budget: int, step_cap: int) -> Optional[Violation]:
    status = record.result.status
    if status is RunStatus.STEP_CAP_EXCEEDED:
        return StepCapViolation(record, step_cap)
    if status is RunStatus.APPLICABILITY_VIOLATION:
        return ApplicabilityFailure(record)
    if record.verdict is not record.expected_verdict:
        return CorrectnessViolation(record, record.oracle)
    if record.result.branches > budget:
        return BudgetViolation(record, budget)
    return None


def run_family(
    machine: Program,
    conv: Convention,
    n: int,
    repr: FormulaSet,
    mode: DecisionMode = DecisionMode.PLAIN,
    step_cap: int = DEFAULT_STEP_CAP,
    *,
    objective: Objective = Objective.SAT_CONJUNCTION,
    rmap: Optional[ReductionMap] = None,
    allow_large: bool = False,
) -> RunFamily:
    """Run the machine on (phi_f, phi_not_f) for every function f, in index order."""
    harness = FoolingHarness(
        machine, conv, n, repr, mode, step_cap, objective, rmap, allow_large
    )
    family = harness.new_family()
    family.records.extend(harness.iter_family())
    return family


def scan_violations(family: RunFamily) -> Optional[Violation]:
    """First record that accepts, overruns the budget or fails to halt; None if clean."""
    for record in family.records:
        violation = scan_record(record, family.budget, family.step_cap)
        if violation is not None:
            return violation
    return None


def find_collision(family: RunFamily) -> Optional[tuple[RunRecord, RunRecord]]:
    """Earliest pair of records (in function-index order) sharing a terminated path.

    Paths are keyed by their full address tuple, so a hash match is always
    confirmed by exact sequence equality.
    """
    if scan_violations(family) is not None:
        raise FamilyNotCleanError("collision search needs a family without violations")
    first_seen: dict[tuple[int, ...], RunRecord] = {}
    for record in family.records:
        earlier = first_seen.setdefault(record.path.addresses, record)
        if earlier is not record:
            return earlier, record
    return None


def _cross(
    harness: FoolingHarness,
    rec_g: RunRecord,
    rec_h: RunRecord,
    distinct_paths: int,
) -> CrossedCounterexample:
    g = harness.table(rec_g.function_index)
    h = harness.table(rec_h.function_index)
    shared = rec_g.path

    crossed = (harness.record(g, h), harness.record(h, g))
    for run_record in crossed:
        if not run_record.result.halted or run_record.path.addresses != shared.addresses:
            raise Lemma2ViolationError(
                f"crossed run ({run_record.function_index}, {run_record.partner_index}) "
                f"left the shared path of functions {g.index} and {h.index}"
            )

    s = distinguishing_assignment(g, h)
    if s is None:
        raise InternalConsistencyError(f"functions {g.index} and {h.index} are identical")

    refuted = next((r for r in crossed if r.oracle.satisfiable), None)
    if refuted is None:
        raise InternalConsistencyError(
            f"neither crossing of functions {g.index} and {h.index} is satisfiable"
        )
    if refuted.verdict is not rec_g.verdict:
        raise InternalConsistencyError(
            "crossed run on the shared path reached a different verdict"
        )
    other = crossed[1] if refuted is crossed[0] else crossed[0]
    assert refuted.oracle.witness is not None
    return CrossedCounterexample(
        g=g,
        h=h,
        shared_path=shared,
        crossed_run=refuted,
        other_crossed_run=other,
        oracle_witness=refuted.oracle.witness,
        distinguishing=s,
        machine_verdict=refuted.verdict,
        distinct_paths=distinct_paths,
    )


def cross_and_refute(
    machine: Program,
    conv: Convention,
    n: int,
    repr: FormulaSet,
    mode: DecisionMode,
    g: TruthTable,
    h: TruthTable,
    step_cap: int = DEFAULT_STEP_CAP,
    *,
    objective: Objective = Objective.SAT_CONJUNCTION,
    rmap: Optional[ReductionMap] = None,
    allow_large: bool = False,
) -> CrossedCounterexample:
    """Cross two family members that share a terminated rejecting path."""
    harness = FoolingHarness(
        machine, conv, n, repr, mode, step_cap, objective, rmap, allow_large
    )
    rec_g = harness.record(g, g)
    rec_h = harness.record(h, h)
    for rec in (rec_g, rec_h):
        if scan_record(rec, harness.budget, step_cap) is not None:
            raise FamilyNotCleanError(f"run for function {rec.function_index} is not clean")
    if g == h or rec_g.path.addresses != rec_h.path.addresses:
        raise FamilyNotCleanError(
            f"functions {g.index} and {h.index} do not share a terminated path"
        )
    return _cross(harness, rec_g, rec_h, distinct_paths=0)


# ---------------------------------------------------------------------------
# Independent re-verification
# ---------------------------------------------------------------------------


def _brute_force(objective: Objective, f1: Formula, f2: Formula, width: int) -> Optional[Assignment]:
    """Assignment-by-assignment evaluation, deliberately not bit-parallel."""
    if objective is Objective.FALSIFY_DISJUNCTION:
        f1, f2 = dualize(f1), dualize(f2)
    for values in product((False, True), repeat=width):
        a = Assignment(values)
        if evaluate(f1, a) and evaluate(f2, a):
            return a
    return None


def _recheck_run(harness: FoolingHarness, record: RunRecord) -> None:
    result, path, verdict = harness.execute(record.input)
    if (
        result.status is not record.result.status
        or result.trace != record.result.trace
        or verdict is not record.verdict
    ):
        raise VerificationError(
            f"re-simulation of run ({record.function_index}, {record.partner_index}) differs"
        )


def _recheck_oracle(harness: FoolingHarness, record: RunRecord) -> None:
    f1 = harness.conjunct(harness.table(record.function_index), 0)
    f2 = harness.conjunct(negate(harness.table(record.partner_index)), 1)
    witness = _brute_force(harness.objective, f1, f2, scope(f1, f2, minimum=harness.n))
    if (witness is not None) != record.oracle.satisfiable:
        raise VerificationError(
            f"oracle disagrees with brute force on ({record.function_index}, "
            f"{record.partner_index})"
        )


def verify_outcome(outcome: AttackOutcome, harness: FoolingHarness) -> None:
    """Re-simulate the cited run(s) and re-check the oracle; raise on any mismatch."""
    if isinstance(outcome, CrossedCounterexample):
        for record in (outcome.crossed_run, outcome.other_crossed_run):
            _recheck_run(harness, record)
            _recheck_oracle(harness, record)
        if outcome.crossed_run.path.addresses != outcome.shared_path.addresses:
            raise VerificationError("crossed run does not follow the shared path")
        if outcome.machine_verdict is outcome.crossed_run.expected_verdict:
            raise VerificationError("crossed run answered correctly")
        f1 = harness.conjunct(outcome.g, 0)
        f2 = harness.conjunct(negate(outcome.h), 1)
        if outcome.crossed_run.function_index != outcome.g.index:
            f1 = harness.conjunct(outcome.h, 0)
            f2 = harness.conjunct(negate(outcome.g), 1)
        if harness.objective is Objective.FALSIFY_DISJUNCTION:
            f1, f2 = dualize(f1), dualize(f2)
        w = outcome.oracle_witness
        if not (evaluate(f1, w) and evaluate(f2, w)):
            raise VerificationError("oracle witness does not satisfy the crossed conjunction")
        return

    record = outcome.record
    _recheck_run(harness, record)
    if isinstance(outcome, CorrectnessViolation):
        _recheck_oracle(harness, record)
    elif isinstance(outcome, BudgetViolation):
        if record.result.branches <= outcome.budget:
            raise VerificationError("budget violation cites a run within budget")


def attack(
    machine: Program,
    conv: Convention,
    n: int,
    repr: FormulaSet,
    mode: DecisionMode = DecisionMode.PLAIN,
    step_cap: int = DEFAULT_STEP_CAP,
    *,
    objective: Objective = Objective.SAT_CONJUNCTION,
    rmap: Optional[ReductionMap] = None,
    allow_large: bool = False,
) -> AttackOutcome:
    """Refute ``machine`` as a decider within 2**n - 1 branches.

    The family is run lazily so the first violation short-circuits the
    remaining runs.
    """
    harness = FoolingHarness(
        machine, conv, n, repr, mode, step_cap, objective, rmap, allow_large
    )
    family = harness.new_family()
    outcome: AttackOutcome
    for record in harness.iter_family():
        violation = scan_record(record, harness.budget, step_cap)
        if violation is not None:
            verify_outcome(violation, harness)
            logger.info(
                "Attack found %s on function %d after %d runs",
                violation.kind,
                record.function_index,
                len(family.records) + 1,
            )
            return violation
        family.records.append(record)

    distinct = family.distinct_paths()
    if distinct > path_bound(n):
        raise PigeonholeError(
            f"clean family uses {distinct} terminated paths, more than {path_bound(n)}"
        )
    collision = find_collision(family)
    if collision is None:
        raise PigeonholeError(f"{len(family.records)} clean runs but no shared path")

    outcome = _cross(harness, *collision, distinct_paths=distinct)
    verify_outcome(outcome, harness)
    logger.info(
        "Attack found crossed counterexample for functions %d and %d (%d distinct paths)",
        outcome.g.index,
        outcome.h.index,
        distinct,
    )
    return outcome


# ---------------------------------------------------------------------------
# Lemma 2 crossing probe
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Lemma2Result:
    """``counter_witness`` names the crossed run that left the shared path."""

    holds: bool
    vacuous: bool
    shared_path: Optional[Path] = None
    counter_witness: Optional[str] = None


def lemma2_probe(
    machine: Program,
    conv: Convention,
    parts: tuple[str, str, str, str],
    step_cap: int = DEFAULT_STEP_CAP,
) -> Lemma2Result:
    """Run (a1,b1) and (a2,b2); if both halt on one path, both crossings must too."""
    a1, b1, a2, b2 = parts

    def follow(first: str, second: str) -> RunResult:
        space = layout(BipartiteInput(first=first, second=second), conv)
        return run(machine, space, conv.initial_head, step_cap)

    base1 = follow(a1, b1)
    base2 = follow(a2, b2)
    if not (base1.halted and base2.halted and base1.trace == base2.trace):
        return Lemma2Result(holds=True, vacuous=True)

    shared = path_of(base1.trace, machine)
    for label, (first, second) in (("(a1, b2)", (a1, b2)), ("(a2, b1)", (a2, b1))):
        crossed = follow(first, second)
        if not crossed.halted or crossed.trace != base1.trace:
            logger.warning("Lemma 2 counter-witness: %s left path %s", label, shared.addresses)
            return Lemma2Result(
                holds=False, vacuous=False, shared_path=shared, counter_witness=label
            )
    return Lemma2Result(holds=True, vacuous=False, shared_path=shared)


@dataclass
class Lemma2Summary:
    trials: int = 0
    antecedent_held: int = 0
    counter_witnesses: list[dict[str, str]] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.counter_witnesses


def probe_lemma2_randomly(
    trials: int,
    seed: int,
    step_cap: int,
    max_program_size: int = 40,
) -> Lemma2Summary:
    """Random machines, conventions and parts; see ``postlb.utils.generators``."""

    rng = random.Random(seed)
    summary = Lemma2Summary()
    for _ in range(trials):
        machine = random_program(rng, max_size=max_program_size)
        conv = random_convention(rng)
        parts = random_parts(rng)
        result = lemma2_probe(machine, conv, parts, step_cap)
        summary.trials += 1
        if not result.vacuous:
            summary.antecedent_held += 1
        if not result.holds:
            summary.counter_witnesses.append(
                {
                    "program": machine.render(),
                    "convention": conv.render(),
                    "parts": " ".join(parts),
                    "crossed_run": result.counter_witness or "",
                }
            )
    logger.info(
        "Lemma 2 probe: %d trials, %d with a shared base path, %d counter-witnesses",
        summary.trials,
        summary.antecedent_held,
        len(summary.counter_witnesses),
    )
    return summary
