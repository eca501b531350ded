# SPDX-License-Identifier: Apache-2.0
"""
Execution paths of Post machine programs.

A path is the exact sequence of instruction addresses executed from address
1. It is terminated when it ends with STOP and open otherwise. A *line* is
the forced run of type-A instructions beginning at some address, closed by
the first BRANCH or STOP; every path from address 1 is a concatenation of
lines, which is what makes the enumeration below exhaustive.

The enumeration is purely structural: tape contents are never consulted, so
a path is counted even when no input can realise it.
"""

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from enum import StrEnum

from postlb.errors import TraceError
from postlb.machine import Program

logger = logging.getLogger(__name__)


class PathKind(StrEnum):
    TERMINATED = "terminated"
    OPEN = "open"


@dataclass(frozen=True, slots=True)
class Path:
    addresses: tuple[int, ...]
    kind: PathKind
    branch_count: int

    @property
    def terminated(self) -> bool:
        return self.kind is PathKind.TERMINATED

    def __len__(self) -> int:
        return len(self.addresses)


@dataclass(frozen=True, slots=True)
class Line:
    """Addresses of a line; an empty tuple marks a divergent start."""

    addresses: tuple[int, ...]

    @property
    def divergent(self) -> bool:
        return not self.addresses

    @property
    def last(self) -> int:
        return self.addresses[-1]


DIVERGENT = Line(())


def line_from(program: Program, start: int) -> Line:
    """Follow fixed successors from ``start`` until a BRANCH or STOP is appended.

    Returns ``DIVERGENT`` when the type-A chain revisits an address.
    """
    addresses: list[int] = []
    seen: set[int] = set()
    address = start
    while True:
        if address in seen:
            return DIVERGENT
        seen.add(address)
        addresses.append(address)
        instr = program[address]
        if not instr.is_type_a:
            return Line(tuple(addresses))
        address = instr.next  # type: ignore[assignment]


@dataclass
class PathSet:
    """Terminated paths with at most ``budget`` branches plus open paths with
    exactly ``budget + 1`` branches, each open one ending in a BRANCH."""

    budget: int
    terminated: list[Path] = field(default_factory=list)
    open: list[Path] = field(default_factory=list)

    @property
    def total(self) -> int:
        return len(self.terminated) + len(self.open)

    @property
    def bound(self) -> int:
        return 2**self.budget

    @property
    def holds(self) -> bool:
        return self.total <= self.bound


@dataclass(frozen=True, slots=True)
class Lemma1Level:
    m: int
    terminated_count: int
    open_count: int
    bound: int

    @property
    def holds(self) -> bool:
        return self.terminated_count + self.open_count <= self.bound


def _extend(program: Program, path: Path, lines: dict[int, Line]) -> Iterable[Path]:
    """Append the line beginning at each alternative successor of ``path``."""
    branch = program[path.addresses[-1]]
    for target in dict.fromkeys(branch.successors()):
        line = lines.get(target)
        if line is None:
            line = lines[target] = line_from(program, target)
        if line.divergent:
            continue
        yield _close(program, path.addresses + line.addresses, path.branch_count)


def _close(program: Program, addresses: tuple[int, ...], prior_branches: int) -> Path:
    if program[addresses[-1]].is_stop:
        return Path(addresses, PathKind.TERMINATED, prior_branches)
    return Path(addresses, PathKind.OPEN, prior_branches + 1)


def enumerate_levels(program: Program, m_max: int) -> list[PathSet]:
    """Build ``PathSet`` for every budget ``0..m_max`` in one breadth-first pass.

    Open paths are grouped by branch count: the frontier at depth ``k`` holds
    the open paths with ``k`` branches, and extending it yields terminated
    paths with ``k`` branches and open paths with ``k + 1``.
    """
    if m_max < 0:
        raise ValueError(f"branch budget must be non-negative, got {m_max}")

    terminated_by_count: list[list[Path]] = [[] for _ in range(m_max + 1)]
    open_by_count: list[list[Path]] = [[] for _ in range(m_max + 2)]

    first = line_from(program, 1)
    if not first.divergent:
        start = _close(program, first.addresses, 0)
        if start.terminated:
            terminated_by_count[0].append(start)
        else:
            open_by_count[1].append(start)

    lines: dict[int, Line] = {}
    for k in range(1, m_max + 1):
        produced: dict[tuple[int, ...], Path] = {}
        for path in open_by_count[k]:
            for extended in _extend(program, path, lines):
                produced.setdefault(extended.addresses, extended)
        for extended in produced.values():
            if extended.terminated:
                terminated_by_count[k].append(extended)
            else:
                open_by_count[k + 1].append(extended)
        logger.debug(
            "Depth %d: %d terminated, %d open",
            k,
            len(terminated_by_count[k]),
            len(open_by_count[k + 1]),
        )

    levels = []
    cumulative: list[Path] = []
    for m in range(m_max + 1):
        cumulative = cumulative + terminated_by_count[m]
        levels.append(PathSet(budget=m, terminated=cumulative, open=open_by_count[m + 1]))
    return levels


def enumerate_paths(program: Program, m: int) -> PathSet:
    """Terminated paths with at most ``m`` branches and open paths with ``m + 1``."""
    return enumerate_levels(program, m)[m]


def verify_lemma1(program: Program, m_max: int) -> list[Lemma1Level]:
    """Check ``|terminated| + |open| <= 2**m`` at every budget up to ``m_max``."""
    return [
        Lemma1Level(
            m=level.budget,
            terminated_count=len(level.terminated),
            open_count=len(level.open),
            bound=level.bound,
        )
        for level in enumerate_levels(program, m_max)
    ]


def path_of(trace: Sequence[int], program: Program) -> Path:
    """Turn an executed trace into a ``Path``.

    Raises ``TraceError`` when the trace breaks the successor relation, which
    can only mean the simulator is wrong.
    """
    if not trace:
        raise TraceError("empty trace")
    if trace[0] != 1:
        raise TraceError(f"trace starts at address {trace[0]}, not 1")

    branches = 0
    for position, address in enumerate(trace):
        try:
            instr = program[address]
        except KeyError:
            raise TraceError(f"trace position {position} names missing address {address}")
        if instr.is_branch:
            branches += 1
        if position + 1 < len(trace):
            following = trace[position + 1]
            if instr.is_stop:
                raise TraceError(f"trace continues past STOP at position {position}")
            if following not in instr.successors():
                raise TraceError(
                    f"address {following} cannot follow {address} at position {position + 1}"
                )

    kind = PathKind.TERMINATED if program[trace[-1]].is_stop else PathKind.OPEN
    return Path(tuple(trace), kind, branches)
