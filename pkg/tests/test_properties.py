# SPDX-License-Identifier: Apache-2.0
"""
Property-based and seeded randomised tests.

Hypothesis drives the small structural properties; the larger sweeps use
seeded ``random.Random`` generators so a failure names a reproducible seed.
"""

import random

import pytest
from hypothesis import given, settings, strategies as st

from postlb.attack import (
    CrossedCounterexample,
    DecisionMode,
    attack,
    lemma2_probe,
    path_bound,
    probe_lemma2_randomly,
)
from postlb.boolean import (
    And,
    Const,
    FormulaStyle,
    Not,
    Or,
    Var,
    full_representation,
    parse_formula,
    sat_conj,
    scope,
    to_text,
    truth_table,
)
from postlb.convention import BipartiteInput, Convention, PartitionId, Verdict, layout, partition_of
from postlb.encoding import decode_formula, encode_formula
from postlb.machine import Instruction, Opcode, Program, SymbolSpace, run
from postlb.paths import enumerate_paths, path_of, verify_lemma1
from postlb.reduction import CnfFormula, Literal, ReductionMap, dualize, to_3cnf
from postlb.utils.generators import random_convention, random_formula, random_program

SWEEP_SEED = 20240601


@st.composite
def programs(draw, max_size: int = 12):
    """Valid programs with uniformly drawn jump targets."""
    size = draw(st.integers(min_value=1, max_value=max_size))
    targets = st.integers(min_value=1, max_value=size)
    instructions = []
    for address in range(1, size + 1):
        opcode = draw(st.sampled_from(list(Opcode)))
        if opcode is Opcode.STOP:
            instructions.append(Instruction(address, opcode))
        elif opcode is Opcode.BRANCH:
            instructions.append(
                Instruction(address, opcode, on_marked=draw(targets), on_blank=draw(targets))
            )
        else:
            instructions.append(Instruction(address, opcode, next=draw(targets)))
    return Program(tuple(instructions))


boxes = st.text(alphabet="bm", min_size=1, max_size=10)

formulas = st.recursive(
    st.builds(Var, st.integers(min_value=1, max_value=4)) | st.builds(Const, st.booleans()),
    lambda children: st.builds(Not, children)
    | st.builds(And, children, children)
    | st.builds(Or, children, children),
    max_leaves=12,
)

literals = st.builds(Literal, st.integers(min_value=1, max_value=4), st.booleans())
cnfs = st.lists(
    st.lists(literals, min_size=1, max_size=6).map(tuple), min_size=1, max_size=3
).map(lambda clauses: CnfFormula(tuple(clauses)))


@st.composite
def conventions(draw, spread: int = 6):
    """Conventions with every anchor within ``spread`` boxes of the split."""
    split = draw(st.integers(min_value=-spread, max_value=spread))
    near = st.integers(min_value=split - spread, max_value=split + spread)
    return Convention(
        initial_head=draw(near),
        split=split,
        first_anchor=draw(st.integers(min_value=split - spread, max_value=split - 1)),
        second_anchor=draw(st.integers(min_value=split, max_value=split + spread)),
        answer_box=draw(near),
        answer_marked_means=draw(st.sampled_from([Verdict.ACCEPT, Verdict.REJECT])),
    )


@st.composite
def same_shape_inputs(draw):
    """Two bipartite inputs whose parts have pairwise equal lengths."""
    first_len = draw(st.integers(min_value=1, max_value=8))
    second_len = draw(st.integers(min_value=1, max_value=8))
    firsts = st.text(alphabet="bm", min_size=first_len, max_size=first_len)
    seconds = st.text(alphabet="bm", min_size=second_len, max_size=second_len)
    return (
        BipartiteInput(first=draw(firsts), second=draw(seconds)),
        BipartiteInput(first=draw(firsts), second=draw(seconds)),
    )


def _restricted(space: SymbolSpace, conv: Convention, part: PartitionId) -> set[int]:
    return {address for address in space.marked if partition_of(conv, address) is part}


class TestMachineProperties:
    """Properties of single runs."""

    @given(programs(), boxes, st.integers(min_value=-5, max_value=5))
    @settings(max_examples=200)
    def test_run_leaves_input_alone(self, program, tape, head):
        """Test that running never touches the caller's space."""
        space = SymbolSpace.from_boxes(tape, 0)
        before = set(space.marked)
        run(program, space, head, step_cap=200)
        assert space.marked == before

    @given(programs(), boxes, st.integers(min_value=-5, max_value=5))
    @settings(max_examples=200)
    def test_halting_runs_follow_enumerated_paths(self, program, tape, head):
        """Test that a halted run's path is among the enumerated terminated paths."""
        result = run(program, SymbolSpace.from_boxes(tape, 0), head, step_cap=500)
        if not result.halted or result.branches > 6:
            return
        path = path_of(result.trace, program)
        assert path.terminated
        assert path.branch_count == result.branches
        terminated = {p.addresses for p in enumerate_paths(program, result.branches).terminated}
        assert path.addresses in terminated

    @given(programs(), boxes, st.integers(min_value=-5, max_value=5))
    @settings(max_examples=200)
    def test_writes_stay_under_the_head(self, program, tape, head):
        """Test that only boxes the head has visited change between start and finish."""
        space = SymbolSpace.from_boxes(tape, 0)
        visited: set[int] = set()
        result = run(
            program, space, head, step_cap=300, on_step=lambda _, before, __: visited.add(before)
        )
        assert space.marked ^ result.final_state.space.marked <= visited

    @given(programs(), boxes, st.integers(min_value=-5, max_value=5))
    @settings(max_examples=200)
    def test_head_moves_one_box_at_most(self, program, tape, head):
        """Test that only RIGHT and LEFT move the head, by exactly one box."""
        moves = []

        def record(instr, before, state):
            moves.append((instr.opcode, state.head - before))

        run(program, SymbolSpace.from_boxes(tape, 0), head, step_cap=300, on_step=record)
        for opcode, delta in moves:
            expected = {Opcode.RIGHT: 1, Opcode.LEFT: -1}.get(opcode, 0)
            assert delta == expected

    @given(programs(), boxes, st.integers(min_value=-5, max_value=5))
    @settings(max_examples=200)
    def test_trace_is_a_program_path(self, program, tape, head):
        """Test that every non-empty trace respects the successor relation."""
        result = run(program, SymbolSpace.from_boxes(tape, 0), head, step_cap=300)
        if not result.trace:
            return
        path = path_of(result.trace, program)
        assert path.terminated == result.halted
        assert path.branch_count == result.branches

    @given(programs(), boxes, boxes, boxes, boxes)
    @settings(max_examples=200)
    def test_crossing_keeps_the_path(self, program, a1, b1, a2, b2):
        """Test that crossing two runs on one path stays on that path."""
        result = lemma2_probe(program, Convention(), (a1, b1, a2, b2), step_cap=500)
        assert result.holds

    @given(programs(), conventions(), boxes, boxes, boxes, boxes)
    @settings(max_examples=200)
    def test_crossing_keeps_the_path_for_any_convention(self, program, conv, a1, b1, a2, b2):
        """Test the crossing property when anchors, answer box and head start move."""
        result = lemma2_probe(program, conv, (a1, b1, a2, b2), step_cap=500)
        assert result.holds


class TestLayoutProperties:
    """Properties of laying bipartite inputs out on the tape."""

    @given(conventions(), boxes, boxes, boxes)
    def test_equal_first_parts_give_equal_first_partitions(self, conv, first, second, other):
        """Test that the first partition depends on the first part only."""
        one = layout(BipartiteInput(first=first, second=second), conv)
        two = layout(BipartiteInput(first=first, second=other), conv)
        part = PartitionId.FIRST
        assert _restricted(one, conv, part) == _restricted(two, conv, part)

    @given(conventions(), boxes, boxes, boxes)
    def test_equal_second_parts_give_equal_second_partitions(self, conv, second, first, other):
        """Test that the second partition depends on the second part only."""
        one = layout(BipartiteInput(first=first, second=second), conv)
        two = layout(BipartiteInput(first=other, second=second), conv)
        part = PartitionId.SECOND
        assert _restricted(one, conv, part) == _restricted(two, conv, part)

    @given(conventions(), boxes, boxes)
    def test_parts_land_in_their_own_partition(self, conv, first, second):
        """Test that first-part boxes sit below the split and second-part boxes at or above it."""
        only_first = layout(BipartiteInput(first=first, second="b"), conv).marked
        only_second = layout(BipartiteInput(first="b", second=second), conv).marked
        assert all(address < conv.split for address in only_first)
        assert all(address >= conv.split for address in only_second)
        both = layout(BipartiteInput(first=first, second=second), conv).marked
        assert both == only_first | only_second
        assert not only_first & only_second

    @given(conventions(), same_shape_inputs())
    def test_layout_is_injective_for_fixed_lengths(self, conv, inputs):
        """Test that distinct inputs of equal shape give distinct tapes."""
        one, two = inputs
        if one == two:
            return
        assert layout(one, conv).marked != layout(two, conv).marked


class TestPathProperties:
    """Properties of path enumeration."""

    @given(programs())
    @settings(max_examples=200)
    def test_lemma1_bound(self, program):
        """Test the path-count bound for small budgets."""
        assert all(level.holds for level in verify_lemma1(program, 6))

    @given(programs())
    @settings(max_examples=100)
    def test_terminated_paths_grow(self, program):
        """Test that raising the budget never loses a terminated path."""
        lower = {p.addresses for p in enumerate_paths(program, 2).terminated}
        upper = {p.addresses for p in enumerate_paths(program, 3).terminated}
        assert lower <= upper


class TestFormulaProperties:
    """Properties of formulas, encoding and reduction."""

    @given(formulas)
    def test_text_round_trip(self, formula):
        """Test that printed formulas parse back to the same tree."""
        assert parse_formula(to_text(formula)) == formula

    @given(formulas)
    def test_encoding_round_trip(self, formula):
        """Test that encoded formulas decode back to the same tree."""
        encoded = encode_formula(formula)
        assert encoded[0] == "b"
        assert decode_formula(encoded) == formula

    @given(formulas)
    def test_dualize_negates(self, formula):
        """Test that the dual has the complemented table."""
        assert truth_table(dualize(formula), 4) == ~truth_table(formula, 4)

    @given(cnfs)
    @settings(max_examples=200)
    def test_reduction_equisatisfiable(self, cnf):
        """Test that the 3CNF image is satisfiable exactly when the input is."""
        rmap = ReductionMap.covering([cnf], 4)
        image = to_3cnf(cnf, rmap)
        assert image.width <= 3
        width = scope(image.to_formula(), minimum=4)
        original = sat_conj(cnf.to_formula(), Const(True), 4)
        reduced = sat_conj(image.to_formula(), Const(True), width)
        assert original.satisfiable == reduced.satisfiable


class TestSeededSweeps:
    """Larger randomised sweeps with fixed seeds."""

    def test_lemma1_sweep(self):
        """Test the path-count bound on 1000 random programs for m up to 8."""
        rng = random.Random(SWEEP_SEED)
        for trial in range(1000):
            program = random_program(rng)
            failing = [level.m for level in verify_lemma1(program, 8) if not level.holds]
            assert not failing, f"trial {trial}: bound fails at m={failing}"

    def test_lemma2_sweep(self):
        """Test the crossing check on 1000 random machines and conventions."""
        summary = probe_lemma2_randomly(1000, SWEEP_SEED, 10_000)
        assert summary.trials == 1000
        assert summary.holds, summary.counter_witnesses[:1]

    @pytest.mark.parametrize("n", [1, 2])
    def test_attack_is_total(self, n):
        """Test that every one of 200 random machines gets a verified outcome."""
        rng = random.Random(SWEEP_SEED + n)
        representation = full_representation(n)
        for _ in range(200):
            program = random_program(rng)
            outcome = attack(program, Convention(), n, representation, step_cap=10_000)
            if isinstance(outcome, CrossedCounterexample):
                assert outcome.distinct_paths <= path_bound(n)
                assert outcome.crossed_run.expected_verdict is not outcome.machine_verdict

    @pytest.mark.parametrize("n", [1, 2])
    def test_attack_is_total_under_random_conventions(self, n):
        """Test 200 random machines, each under its own random convention."""
        rng = random.Random(SWEEP_SEED + 10 * n)
        representation = full_representation(n)
        for _ in range(200):
            program = random_program(rng)
            conv = random_convention(rng)
            outcome = attack(program, conv, n, representation, step_cap=10_000)
            if isinstance(outcome, CrossedCounterexample):
                assert outcome.crossed_run.expected_verdict is not outcome.machine_verdict

    def test_reduced_attack_is_total(self):
        """Test 200 random machines on the 3CNF images of the maxterm representation."""
        rng = random.Random(SWEEP_SEED + 100)
        representation = full_representation(1, FormulaStyle.MAXTERM_CNF)
        for _ in range(200):
            program = random_program(rng)
            outcome = attack(
                program, Convention(), 1, representation, DecisionMode.REDUCED, step_cap=10_000
            )
            if isinstance(outcome, CrossedCounterexample):
                assert outcome.distinct_paths <= path_bound(1)
                assert outcome.crossed_run.expected_verdict is not outcome.machine_verdict

    def test_formula_round_trips(self):
        """Test 1000 random formulas through text and box encodings."""
        rng = random.Random(SWEEP_SEED)
        for _ in range(1000):
            formula = random_formula(rng, 4)
            assert parse_formula(to_text(formula)) == formula
            assert decode_formula(encode_formula(formula)) == formula
