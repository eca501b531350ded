# SPDX-License-Identifier: Apache-2.0
"""
CNF to 3CNF reduction and the satisfiability/falsifiability duality.

Clauses wider than three literals are split into a chain linked by fresh
variables::

    (l1 | l2 | l3 | l4 | l5)  ->  (l1 | l2 | y1) & (!y1 | l3 | y2) & (!y2 | l4 | l5)

Clauses narrower than three repeat their last literal. Fresh variables for
conjunct ``c`` are drawn upward from ``fresh_base + c * conjunct_stride``, so
the images of the two conjuncts of a bipartite input never share one.
"""

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from postlb.boolean import (
    And,
    Const,
    Formula,
    Not,
    Or,
    SatResult,
    Var,
    conjoin,
    disjoin,
    max_variable,
    sat_conj,
    scope,
    variables,
)
from postlb.errors import NotCnfError, ReductionError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class Literal:
    variable: int
    positive: bool = True

    def __neg__(self) -> "Literal":
        return Literal(self.variable, not self.positive)

    def to_formula(self) -> Formula:
        return Var(self.variable) if self.positive else Not(Var(self.variable))


Clause = tuple[Literal, ...]


@dataclass(frozen=True)
class CnfFormula:
    clauses: tuple[Clause, ...]

    def __post_init__(self) -> None:
        if not self.clauses:
            raise NotCnfError("a CNF formula needs at least one clause")
        for clause in self.clauses:
            if not clause:
                raise NotCnfError("empty clause")
            for literal in clause:
                if literal.variable < 1:
                    raise NotCnfError(f"variable indices start at 1, got {literal.variable}")

    @classmethod
    def from_formula(cls, formula: Formula) -> "CnfFormula":
        """Read an AND of ORs of literals; constants are not CNF."""
        return cls(tuple(_clause(c) for c in _flatten(formula, And)))

    def to_formula(self) -> Formula:
        return conjoin([disjoin([lit.to_formula() for lit in clause]) for clause in self.clauses])

    def variables(self) -> set[int]:
        return {lit.variable for clause in self.clauses for lit in clause}

    @property
    def width(self) -> int:
        return max(len(clause) for clause in self.clauses)


def _flatten(formula: Formula, op: type) -> list[Formula]:
    if isinstance(formula, op):
        return _flatten(formula.left, op) + _flatten(formula.right, op)  # type: ignore[attr-defined]
    return [formula]


def _clause(formula: Formula) -> Clause:
    literals = []
    for part in _flatten(formula, Or):
        match part:
            case Var(index):
                literals.append(Literal(index, True))
            case Not(Var(index)):
                literals.append(Literal(index, False))
            case Const():
                raise NotCnfError("constants are not CNF literals")
            case _:
                raise NotCnfError(f"not a literal: {part!r}")
    return tuple(literals)


@dataclass(frozen=True)
class ReductionMap:
    """Where fresh variables come from.

    Conjunct ``c`` owns the indices
    ``[fresh_base + c * conjunct_stride, fresh_base + (c + 1) * conjunct_stride)``.
    """

    fresh_base: int
    conjunct_stride: int

    def __post_init__(self) -> None:
        if self.fresh_base < 1 or self.conjunct_stride < 1:
            raise ReductionError("fresh_base and conjunct_stride must be positive")

    @classmethod
    def covering(cls, formulas: Iterable[CnfFormula], n: int = 0) -> "ReductionMap":
        """Smallest map whose ranges fit every formula in ``formulas``."""
        formulas = list(formulas)
        highest = max([n, *(max(f.variables()) for f in formulas)])
        needed = max([1, *(fresh_needed(f) for f in formulas)])
        return cls(fresh_base=highest + 1, conjunct_stride=needed)

    def first_fresh(self, conjunct_id: int) -> int:
        return self.fresh_base + conjunct_id * self.conjunct_stride

    def owner(self, variable: int) -> int | None:
        """Conjunct that owns a fresh variable, or None for an original one."""
        if variable < self.fresh_base:
            return None
        return (variable - self.fresh_base) // self.conjunct_stride


def fresh_needed(f: CnfFormula) -> int:
    return sum(max(0, len(clause) - 3) for clause in f.clauses)


def to_3cnf(f: CnfFormula, rmap: ReductionMap, conjunct_id: int = 0) -> CnfFormula:
    """Equisatisfiable 3CNF image of ``f`` with every clause exactly three wide."""
    if conjunct_id not in (0, 1):
        raise ReductionError(f"conjunct_id must be 0 or 1, got {conjunct_id}")
    if max(f.variables()) >= rmap.fresh_base:
        raise ReductionError(
            f"x{max(f.variables())} collides with the fresh range starting at x{rmap.fresh_base}"
        )
    if fresh_needed(f) > rmap.conjunct_stride:
        raise ReductionError(
            f"formula needs {fresh_needed(f)} fresh variables but the stride is "
            f"{rmap.conjunct_stride}"
        )

    next_fresh = rmap.first_fresh(conjunct_id)
    clauses: list[Clause] = []
    for clause in f.clauses:
        if len(clause) <= 3:
            clauses.append(clause + (clause[-1],) * (3 - len(clause)))
            continue
        link = Literal(next_fresh)
        next_fresh += 1
        clauses.append((clause[0], clause[1], link))
        for literal in clause[2:-2]:
            fresh = Literal(next_fresh)
            next_fresh += 1
            clauses.append((-link, literal, fresh))
            link = fresh
        clauses.append((-link, clause[-2], clause[-1]))
        logger.debug("Split a %d-literal clause into %d clauses", len(clause), len(clause) - 2)
    return CnfFormula(tuple(clauses))


def fresh_variables(f: CnfFormula, rmap: ReductionMap) -> set[int]:
    return {v for v in f.variables() if v >= rmap.fresh_base}


@dataclass
class PreservationReport:
    """Outcome of checking satisfiability preservation over conjunction."""

    checked: int = 0
    violations: list[int] = field(default_factory=list)
    overlapping_fresh: list[int] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.violations and not self.overlapping_fresh


def preserves_sat_over_conjunction(
    t_image_pairs: Sequence[tuple[Formula, Formula, Formula, Formula]], n: int
) -> PreservationReport:
    """Compare ``sat(phi1 & phi2)`` with ``sat(t(phi1) & t(phi2))`` for every pair.

    Variables above ``n`` in the images are treated as fresh; a pair whose
    images share one is reported as overlapping.
    """
    report = PreservationReport()
    for position, (phi1, phi2, t1, t2) in enumerate(t_image_pairs):
        report.checked += 1
        original = sat_conj(phi1, phi2, scope(phi1, phi2, minimum=n))
        image = sat_conj(t1, t2, scope(t1, t2, minimum=n))
        if original.satisfiable != image.satisfiable:
            report.violations.append(position)
        fresh1 = {v for v in variables(t1) if v > n}
        fresh2 = {v for v in variables(t2) if v > n}
        if fresh1 & fresh2:
            report.overlapping_fresh.append(position)
    if not report.holds:
        logger.warning(
            "Satisfiability preservation failed on %d of %d pairs",
            len(report.violations) + len(report.overlapping_fresh),
            report.checked,
        )
    return report


# ---------------------------------------------------------------------------
# Duality
# ---------------------------------------------------------------------------


def _negated(formula: Formula) -> Formula:
    match formula:
        case Const(value):
            return Const(not value)
        case Var():
            return Not(formula)
        case Not(child):
            return _positive(child)
        case And(left, right):
            return Or(_negated(left), _negated(right))
        case Or(left, right):
            return And(_negated(left), _negated(right))
    raise TypeError(f"not a formula: {formula!r}")


def _positive(formula: Formula) -> Formula:
    match formula:
        case Const() | Var():
            return formula
        case Not(child):
            return _negated(child)
        case And(left, right):
            return And(_positive(left), _positive(right))
        case Or(left, right):
            return Or(_positive(left), _positive(right))
    raise TypeError(f"not a formula: {formula!r}")


def dualize(phi: Formula) -> Formula:
    """Negation of ``phi`` pushed down to the literals (De Morgan).

    AND and OR swap and every literal flips, so a CNF input comes back as a
    DNF of the same shape.
    """
    return _negated(phi)


def falsify_disj(f1: Formula, f2: Formula, n: int) -> SatResult:
    """Witness that ``f1 | f2`` is false somewhere, or UNSAT if it is a tautology."""
    return sat_conj(dualize(f1), dualize(f2), n)


def falsifiable(phi: Formula, n: int | None = None) -> bool:
    width = n if n is not None else max(1, max_variable(phi))
    return sat_conj(dualize(phi), Const(True), width).satisfiable
