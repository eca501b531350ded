# SPDX-License-Identifier: Apache-2.0
"""
Post machine programs and their execution.

A program is a fixed, contiguously numbered list of instructions operating a
single head over a two-way infinite tape of boxes, each either marked or
blank. Execution starts at address 1 and continues until ``STOP``.

Source format, one instruction per line, ``#`` starting a comment::

    1: BRANCH marked=2 blank=3
    2: MARK -> 3
    3: STOP
"""

import logging
import re
from collections.abc import Callable, Iterable, Iterator
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Optional

from postlb.errors import (
    ApplicabilityError,
    ProgramStructureError,
    ProgramSyntaxError,
)

logger = logging.getLogger(__name__)

DEFAULT_STEP_CAP = 100_000


class Opcode(StrEnum):
    """Instruction kinds. MARK/UNMARK/RIGHT/LEFT are type A, BRANCH is type B,
    STOP is type C."""

    MARK = "MARK"
    UNMARK = "UNMARK"
    RIGHT = "RIGHT"
    LEFT = "LEFT"
    BRANCH = "BRANCH"
    STOP = "STOP"


TYPE_A = frozenset({Opcode.MARK, Opcode.UNMARK, Opcode.RIGHT, Opcode.LEFT})


@dataclass(frozen=True, slots=True)
class Instruction:
    """One addressed instruction.

    Type-A instructions carry ``next``; BRANCH carries ``on_marked`` and
    ``on_blank``; STOP carries nothing.
    """

    address: int
    opcode: Opcode
    next: Optional[int] = None
    on_marked: Optional[int] = None
    on_blank: Optional[int] = None

    def __post_init__(self) -> None:
        if self.address < 1:
            raise ProgramStructureError(f"address must be positive, got {self.address}")
        if self.opcode in TYPE_A:
            ok = self.next is not None and self.on_marked is None and self.on_blank is None
        elif self.opcode is Opcode.BRANCH:
            ok = self.next is None and self.on_marked is not None and self.on_blank is not None
        else:
            ok = self.next is None and self.on_marked is None and self.on_blank is None
        if not ok:
            raise ProgramStructureError(
                f"instruction {self.address} ({self.opcode}) has the wrong successors"
            )

    @property
    def is_type_a(self) -> bool:
        return self.opcode in TYPE_A

    @property
    def is_branch(self) -> bool:
        return self.opcode is Opcode.BRANCH

    @property
    def is_stop(self) -> bool:
        return self.opcode is Opcode.STOP

    def successors(self) -> tuple[int, ...]:
        """Addresses that may execute next, (on_marked, on_blank) for BRANCH."""
        if self.next is not None:
            return (self.next,)
        if self.opcode is Opcode.BRANCH:
            assert self.on_marked is not None and self.on_blank is not None
            return (self.on_marked, self.on_blank)
        return ()

    def render(self) -> str:
        """Render back to a source line."""
        if self.opcode is Opcode.BRANCH:
            return f"{self.address}: BRANCH marked={self.on_marked} blank={self.on_blank}"
        if self.opcode is Opcode.STOP:
            return f"{self.address}: STOP"
        return f"{self.address}: {self.opcode.value} -> {self.next}"


@dataclass(frozen=True)
class Program:
    """An immutable program; ``instructions[i]`` sits at address ``i + 1``."""

    instructions: tuple[Instruction, ...]

    def __post_init__(self) -> None:
        if not self.instructions:
            raise ProgramStructureError("program has no instructions; address 1 must exist")
        for expected, instr in enumerate(self.instructions, start=1):
            if instr.address != expected:
                raise ProgramStructureError(
                    f"expected address {expected}, found {instr.address}"
                )
        size = len(self.instructions)
        for instr in self.instructions:
            for target in instr.successors():
                if not 1 <= target <= size:
                    raise ProgramStructureError(
                        f"instruction {instr.address} jumps to missing address {target}"
                    )

    @classmethod
    def from_instructions(cls, instructions: Iterable[Instruction]) -> "Program":
        return cls(tuple(sorted(instructions, key=lambda i: i.address)))

    def __len__(self) -> int:
        return len(self.instructions)

    def __getitem__(self, address: int) -> Instruction:
        if not 1 <= address <= len(self.instructions):
            raise KeyError(address)
        return self.instructions[address - 1]

    def __iter__(self) -> Iterator[Instruction]:
        return iter(self.instructions)

    @property
    def addresses(self) -> range:
        return range(1, len(self.instructions) + 1)

    def render(self) -> str:
        return "\n".join(instr.render() for instr in self.instructions) + "\n"


_LINE_RE = re.compile(
    r"""^\s*(?P<addr>\d+)\s*:\s*
    (?:
        (?P<unary>MARK|UNMARK|RIGHT|LEFT)\s*->\s*(?P<next>\d+)
      | BRANCH\s+marked\s*=\s*(?P<marked>\d+)\s+blank\s*=\s*(?P<blank>\d+)
      | (?P<stop>STOP)
    )\s*$""",
    re.IGNORECASE | re.VERBOSE,
)


def parse_program(text: str) -> Program:
    """Parse program source into a validated ``Program``.

    Raises:
        ProgramSyntaxError: a line matches no instruction form.
        ProgramStructureError: duplicate address, numbering gap or dangling target.
    """
    instructions: dict[int, Instruction] = {}
    source_lines: dict[int, int] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        match = _LINE_RE.match(line)
        if match is None:
            raise ProgramSyntaxError(f"cannot parse {line!r}", lineno)

        address = int(match["addr"])
        if address in instructions:
            raise ProgramStructureError(
                f"duplicate address {address} (first defined on line "
                f"{source_lines[address]})",
                lineno,
            )
        if match["unary"]:
            instr = Instruction(address, Opcode(match["unary"].upper()), next=int(match["next"]))
        elif match["stop"]:
            instr = Instruction(address, Opcode.STOP)
        else:
            instr = Instruction(
                address,
                Opcode.BRANCH,
                on_marked=int(match["marked"]),
                on_blank=int(match["blank"]),
            )
        instructions[address] = instr
        source_lines[address] = lineno

    if not instructions:
        raise ProgramStructureError("program has no instructions; address 1 must exist")

    size = len(instructions)
    for expected in range(1, size + 1):
        if expected not in instructions:
            raise ProgramStructureError(f"gap in numbering: address {expected} is missing")

    for address, instr in instructions.items():
        for target in instr.successors():
            if target not in instructions:
                raise ProgramStructureError(
                    f"instruction {address} jumps to missing address {target}",
                    source_lines[address],
                )

    program = Program.from_instructions(instructions.values())
    logger.debug("Parsed program with %d instructions", len(program))
    return program


@dataclass(slots=True)
class SymbolSpace:
    """Sparse two-way infinite tape: only marked addresses are stored."""

    marked: set[int] = field(default_factory=set)

    @classmethod
    def from_boxes(cls, boxes: str, start: int) -> "SymbolSpace":
        """Place a ``b``/``m`` string with its first box at ``start``."""
        return cls({start + i for i, box in enumerate(boxes) if box == "m"})

    def is_marked(self, address: int) -> bool:
        return address in self.marked

    def copy(self) -> "SymbolSpace":
        return SymbolSpace(set(self.marked))

    def window(self, lo: int, hi: int) -> str:
        """Box states for addresses ``lo..hi`` inclusive as ``b``/``m``."""
        return "".join("m" if x in self.marked else "b" for x in range(lo, hi + 1))


class RunStatus(StrEnum):
    HALTED = "halted"
    STEP_CAP_EXCEEDED = "step_cap_exceeded"
    APPLICABILITY_VIOLATION = "applicability_violation"


@dataclass(slots=True)
class MachineState:
    """Mutable state of one run. A run owns its state exclusively."""

    head: int
    ip: int
    space: SymbolSpace
    branches_executed: int = 0
    steps_executed: int = 0
    trace: list[int] = field(default_factory=list)


@dataclass(frozen=True)
class RunResult:
    status: RunStatus
    final_state: MachineState
    violation_step: Optional[int] = None

    @property
    def halted(self) -> bool:
        return self.status is RunStatus.HALTED

    @property
    def trace(self) -> tuple[int, ...]:
        return tuple(self.final_state.trace)

    @property
    def branches(self) -> int:
        return self.final_state.branches_executed

    @property
    def steps(self) -> int:
        return self.final_state.steps_executed


def step(program: Program, state: MachineState) -> bool:
    """Execute the instruction at ``state.ip`` in place.

    Returns True when the executed instruction was STOP. The executed
    address is appended to the trace; an inapplicable write raises
    ``ApplicabilityError`` and leaves the state untouched.
    """
    instr = program[state.ip]
    opcode = instr.opcode
    space = state.space

    if opcode is Opcode.BRANCH:
        state.branches_executed += 1
        state.ip = instr.on_marked if state.head in space.marked else instr.on_blank  # type: ignore[assignment]
    elif opcode is Opcode.RIGHT:
        state.head += 1
        state.ip = instr.next  # type: ignore[assignment]
    elif opcode is Opcode.LEFT:
        state.head -= 1
        state.ip = instr.next  # type: ignore[assignment]
    elif opcode is Opcode.MARK:
        if state.head in space.marked:
            raise ApplicabilityError(instr.address, state.steps_executed + 1, state.head, opcode)
        space.marked.add(state.head)
        state.ip = instr.next  # type: ignore[assignment]
    elif opcode is Opcode.UNMARK:
        if state.head not in space.marked:
            raise ApplicabilityError(instr.address, state.steps_executed + 1, state.head, opcode)
        space.marked.discard(state.head)
        state.ip = instr.next  # type: ignore[assignment]

    state.trace.append(instr.address)
    state.steps_executed += 1
    return opcode is Opcode.STOP


StepHook = Callable[[Instruction, int, "MachineState"], None]


def run(
    program: Program,
    space: SymbolSpace,
    initial_head: int,
    step_cap: int = DEFAULT_STEP_CAP,
    on_step: Optional[StepHook] = None,
) -> RunResult:
    """Run ``program`` from address 1 until STOP, a violation, or ``step_cap`` steps.

    ``space`` is copied; the caller's tape is never modified. ``on_step`` is
    called after every executed instruction with that instruction, the head
    position before it ran, and the updated state.
    """
    if step_cap < 1:
        raise ValueError(f"step_cap must be at least 1, got {step_cap}")

    state = MachineState(head=initial_head, ip=1, space=space.copy())
    status = RunStatus.STEP_CAP_EXCEEDED
    violation_step: Optional[int] = None
    try:
        while state.steps_executed < step_cap:
            instr = program[state.ip]
            head_before = state.head
            stopped = step(program, state)
            if on_step is not None:
                on_step(instr, head_before, state)
            if stopped:
                status = RunStatus.HALTED
                break
    except ApplicabilityError as exc:
        status = RunStatus.APPLICABILITY_VIOLATION
        violation_step = exc.step

    logger.debug(
        "Run finished: status=%s steps=%d branches=%d head=%d",
        status,
        state.steps_executed,
        state.branches_executed,
        state.head,
    )
    return RunResult(status=status, final_state=state, violation_step=violation_step)
