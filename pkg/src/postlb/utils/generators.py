# SPDX-License-Identifier: Apache-2.0
"""
Seeded random generators for programs, conventions, input parts and formulas.

All generators take an explicit ``random.Random`` so sweeps are reproducible.
"""

import random

from postlb.boolean import And, Const, Formula, Not, Or, Var
from postlb.convention import Convention, Verdict
from postlb.machine import Instruction, Opcode, Program

_OPCODE_WEIGHTS = {
    Opcode.MARK: 2,
    Opcode.UNMARK: 2,
    Opcode.RIGHT: 3,
    Opcode.LEFT: 3,
    Opcode.BRANCH: 3,
    Opcode.STOP: 2,
}


def random_program(rng: random.Random, max_size: int = 40, min_size: int = 1) -> Program:
    """A valid program of ``min_size..max_size`` instructions with uniform jump targets."""
    size = rng.randint(min_size, max_size)
    opcodes = list(_OPCODE_WEIGHTS)
    weights = list(_OPCODE_WEIGHTS.values())
    instructions = []
    for address in range(1, size + 1):
        opcode = rng.choices(opcodes, weights)[0]
        if opcode is Opcode.STOP:
            instructions.append(Instruction(address, opcode))
        elif opcode is Opcode.BRANCH:
            instructions.append(
                Instruction(
                    address,
                    opcode,
                    on_marked=rng.randint(1, size),
                    on_blank=rng.randint(1, size),
                )
            )
        else:
            instructions.append(Instruction(address, opcode, next=rng.randint(1, size)))
    return Program(tuple(instructions))


def random_convention(rng: random.Random, spread: int = 6) -> Convention:
    split = rng.randint(-spread, spread)
    return Convention(
        initial_head=rng.randint(split - spread, split + spread),
        split=split,
        first_anchor=rng.randint(split - spread, split - 1),
        second_anchor=rng.randint(split, split + spread),
        answer_box=rng.randint(split - spread, split + spread),
        answer_marked_means=rng.choice([Verdict.ACCEPT, Verdict.REJECT]),
    )


def random_boxes(rng: random.Random, max_length: int = 12) -> str:
    return "".join(rng.choice("bm") for _ in range(rng.randint(1, max_length)))


def random_parts(rng: random.Random, max_length: int = 12) -> tuple[str, str, str, str]:
    """Parts ``(a1, b1, a2, b2)`` for a crossing probe."""
    a1, b1, a2, b2 = (random_boxes(rng, max_length) for _ in range(4))
    return a1, b1, a2, b2


def random_formula(rng: random.Random, n: int, max_depth: int = 8) -> Formula:
    """A formula over x1..xn whose depth is at most ``max_depth``."""
    if max_depth <= 1 or rng.random() < 0.25:
        if rng.random() < 0.1:
            return Const(rng.random() < 0.5)
        return Var(rng.randint(1, n))
    match rng.randrange(3):
        case 0:
            return Not(random_formula(rng, n, max_depth - 1))
        case 1:
            return And(random_formula(rng, n, max_depth - 1), random_formula(rng, n, max_depth - 1))
        case _:
            return Or(random_formula(rng, n, max_depth - 1), random_formula(rng, n, max_depth - 1))
