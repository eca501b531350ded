# SPDX-License-Identifier: Apache-2.0
"""
Boolean functions of n variables: truth tables, formulas and a brute-force
satisfiability oracle.

Assignments are numbered in binary with x1 as the most significant bit, so
for n = 2 the order is (F,F), (F,T), (T,F), (T,T). Truth tables are
evaluated bit-parallel: every formula is folded into one Python integer whose
bit ``i`` holds its value at assignment ``i``.

Formula text syntax: variables ``x1``..``xn``, constants ``T``/``F``,
operators ``!`` > ``&`` > ``|`` by precedence, parentheses for grouping.
Binary operators associate to the left.
"""

import logging
from collections.abc import Iterator
from dataclasses import dataclass
from enum import StrEnum
from functools import lru_cache
from typing import Optional, Union

from postlb.errors import ArityError, FormulaSyntaxError

logger = logging.getLogger(__name__)

MAX_REPRESENTATION_ARITY = 4
MAX_ORACLE_VARIABLES = 24


# ---------------------------------------------------------------------------
# Assignments and truth tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Assignment:
    values: tuple[bool, ...]

    @classmethod
    def from_index(cls, index: int, n: int) -> "Assignment":
        return cls(tuple(bool(index >> (n - 1 - i) & 1) for i in range(n)))

    @property
    def arity(self) -> int:
        return len(self.values)

    @property
    def index(self) -> int:
        result = 0
        for value in self.values:
            result = result << 1 | value
        return result

    def __getitem__(self, variable: int) -> bool:
        """Value of ``x<variable>`` (1-based)."""
        if not 1 <= variable <= len(self.values):
            raise ArityError(f"x{variable} is not assigned by a {len(self.values)}-variable assignment")
        return self.values[variable - 1]

    def as_dict(self) -> dict[str, bool]:
        return {f"x{i}": value for i, value in enumerate(self.values, start=1)}


@dataclass(frozen=True, slots=True)
class TruthTable:
    """``bits[i]`` is the function's value at assignment ``i``."""

    arity: int
    bits: tuple[bool, ...]

    def __post_init__(self) -> None:
        if self.arity < 1:
            raise ArityError(f"arity must be at least 1, got {self.arity}")
        if len(self.bits) != 1 << self.arity:
            raise ArityError(
                f"a {self.arity}-variable table needs {1 << self.arity} bits, got {len(self.bits)}"
            )

    @classmethod
    def from_mask(cls, mask: int, n: int) -> "TruthTable":
        return cls(n, tuple(bool(mask >> i & 1) for i in range(1 << n)))

    @classmethod
    def from_index(cls, index: int, n: int) -> "TruthTable":
        """Table whose bits, read as a binary numeral with bits[0] first, equal ``index``."""
        size = 1 << n
        if not 0 <= index < 1 << size:
            raise ArityError(f"function index {index} out of range for n={n}")
        return cls(n, tuple(bool(index >> (size - 1 - i) & 1) for i in range(size)))

    @classmethod
    def from_string(cls, text: str) -> "TruthTable":
        """Parse a string of ``0``/``1`` (or ``F``/``T``) characters."""
        mapping = {"0": False, "1": True, "F": False, "T": True}
        try:
            bits = tuple(mapping[c] for c in text.strip().upper())
        except KeyError as exc:
            raise ArityError(f"invalid truth-table character {exc.args[0]!r}") from exc
        size = len(bits)
        if size < 2 or size & (size - 1):
            raise ArityError(f"truth-table length must be a power of two >= 2, got {size}")
        return cls(size.bit_length() - 1, bits)

    @property
    def index(self) -> int:
        result = 0
        for bit in self.bits:
            result = result << 1 | bit
        return result

    @property
    def mask(self) -> int:
        return sum(1 << i for i, bit in enumerate(self.bits) if bit)

    def render(self) -> str:
        return "".join("1" if bit else "0" for bit in self.bits)

    def value_at(self, assignment: Assignment) -> bool:
        return self.bits[assignment.index]

    def __invert__(self) -> "TruthTable":
        return negate(self)


def all_tables(n: int) -> Iterator[TruthTable]:
    """Every table of arity ``n`` in function-index order."""
    for index in range(1 << (1 << n)):
        yield TruthTable.from_index(index, n)


def negate(t: TruthTable) -> TruthTable:
    return TruthTable(t.arity, tuple(not bit for bit in t.bits))


def distinguishing_assignment(g: TruthTable, h: TruthTable) -> Optional[Assignment]:
    """Lowest-index assignment where ``g`` and ``h`` differ, or None if equal."""
    if g.arity != h.arity:
        raise ArityError(f"cannot compare tables of arity {g.arity} and {h.arity}")
    for index, (a, b) in enumerate(zip(g.bits, h.bits)):
        if a != b:
            return Assignment.from_index(index, g.arity)
    return None


# ---------------------------------------------------------------------------
# Formulas
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Const:
    value: bool


@dataclass(frozen=True, slots=True)
class Var:
    index: int

    def __post_init__(self) -> None:
        if self.index < 1:
            raise ArityError(f"variable index must be at least 1, got {self.index}")


@dataclass(frozen=True, slots=True)
class Not:
    child: "Formula"


@dataclass(frozen=True, slots=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Or:
    left: "Formula"
    right: "Formula"


Formula = Union[Const, Var, Not, And, Or]


def conjoin(parts: list[Formula]) -> Formula:
    """Left-nested AND of a non-empty list."""
    result = parts[0]
    for part in parts[1:]:
        result = And(result, part)
    return result


def disjoin(parts: list[Formula]) -> Formula:
    """Left-nested OR of a non-empty list."""
    result = parts[0]
    for part in parts[1:]:
        result = Or(result, part)
    return result


def variables(formula: Formula) -> set[int]:
    match formula:
        case Var(index):
            return {index}
        case Const():
            return set()
        case Not(child):
            return variables(child)
        case And(left, right) | Or(left, right):
            return variables(left) | variables(right)
    raise TypeError(f"not a formula: {formula!r}")


def max_variable(formula: Formula) -> int:
    return max(variables(formula), default=0)


def depth(formula: Formula) -> int:
    match formula:
        case Var() | Const():
            return 1
        case Not(child):
            return 1 + depth(child)
        case And(left, right) | Or(left, right):
            return 1 + max(depth(left), depth(right))
    raise TypeError(f"not a formula: {formula!r}")


def evaluate(formula: Formula, a: Assignment) -> bool:
    match formula:
        case Const(value):
            return value
        case Var(index):
            return a[index]
        case Not(child):
            return not evaluate(child, a)
        case And(left, right):
            return evaluate(left, a) and evaluate(right, a)
        case Or(left, right):
            return evaluate(left, a) or evaluate(right, a)
    raise TypeError(f"not a formula: {formula!r}")


@lru_cache(maxsize=512)
def _variable_mask(index: int, n: int) -> int:
    """Bit ``a`` set iff x<index> is true at assignment ``a``.

    The pattern is ``block`` zeros then ``block`` ones, repeated across all
    ``2**n`` assignments.
    """
    size = 1 << n
    block = 1 << (n - index)
    period = block << 1
    repeat = ((1 << size) - 1) // ((1 << period) - 1)
    return (((1 << block) - 1) << block) * repeat


def _mask(formula: Formula, n: int, full: int) -> int:
    match formula:
        case Const(value):
            return full if value else 0
        case Var(index):
            if index > n:
                raise ArityError(f"x{index} exceeds the {n}-variable scope")
            return _variable_mask(index, n)
        case Not(child):
            return full & ~_mask(child, n, full)
        case And(left, right):
            return _mask(left, n, full) & _mask(right, n, full)
        case Or(left, right):
            return _mask(left, n, full) | _mask(right, n, full)
    raise TypeError(f"not a formula: {formula!r}")


def satisfying_mask(formula: Formula, n: int) -> int:
    """Bit-parallel truth table over ``n`` variables as an integer mask."""
    if n > MAX_ORACLE_VARIABLES:
        raise ArityError(f"{n} variables exceeds the exhaustive-search cap of {MAX_ORACLE_VARIABLES}")
    return _mask(formula, n, (1 << (1 << n)) - 1)


def truth_table(formula: Formula, n: int) -> TruthTable:
    return TruthTable.from_mask(satisfying_mask(formula, n), n)


# ---------------------------------------------------------------------------
# Canonical representatives and full representations
# ---------------------------------------------------------------------------


class FormulaStyle(StrEnum):
    MINTERM_DNF = "minterm-dnf"
    MAXTERM_CNF = "maxterm-cnf"


def _literal(variable: int, positive: bool) -> Formula:
    return Var(variable) if positive else Not(Var(variable))


def formula_from_table(t: TruthTable, style: FormulaStyle = FormulaStyle.MINTERM_DNF) -> Formula:
    """Minterm DNF (OR over satisfying rows) or maxterm CNF (AND over falsifying rows)."""
    n = t.arity
    if style is FormulaStyle.MINTERM_DNF:
        rows = [i for i, bit in enumerate(t.bits) if bit]
        if not rows:
            return And(Var(1), Not(Var(1)))
        terms = []
        for row in rows:
            a = Assignment.from_index(row, n)
            terms.append(conjoin([_literal(v, a[v]) for v in range(1, n + 1)]))
        return disjoin(terms)

    rows = [i for i, bit in enumerate(t.bits) if not bit]
    if not rows:
        return Or(Var(1), Not(Var(1)))
    clauses = []
    for row in rows:
        a = Assignment.from_index(row, n)
        clauses.append(disjoin([_literal(v, not a[v]) for v in range(1, n + 1)]))
    return conjoin(clauses)


@dataclass(frozen=True)
class FormulaSet:
    """One representative formula per truth table, in function-index order."""

    arity: int
    style: FormulaStyle
    members: dict[TruthTable, Formula]

    @property
    def full(self) -> bool:
        return len(self.members) == 1 << (1 << self.arity)

    def __len__(self) -> int:
        return len(self.members)

    def __getitem__(self, table: TruthTable) -> Formula:
        return self.members[table]

    def tables(self) -> list[TruthTable]:
        return sorted(self.members, key=lambda t: t.index)


def full_representation(
    n: int, style: FormulaStyle = FormulaStyle.MINTERM_DNF
) -> FormulaSet:
    """Representatives for all 2**(2**n) functions, each checked against its table."""
    if not 1 <= n <= MAX_REPRESENTATION_ARITY:
        raise ArityError(
            f"full representations are supported for 1 <= n <= {MAX_REPRESENTATION_ARITY}, got {n}"
        )
    members: dict[TruthTable, Formula] = {}
    for table in all_tables(n):
        formula = formula_from_table(table, style)
        if truth_table(formula, n) != table:
            raise ArityError(f"representative of {table.render()} does not round-trip")
        members[table] = formula
    logger.debug("Built %s full representation for n=%d (%d members)", style, n, len(members))
    return FormulaSet(arity=n, style=style, members=members)


# ---------------------------------------------------------------------------
# Oracle
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class SatResult:
    """``witness`` is None exactly when the conjunction is unsatisfiable."""

    witness: Optional[Assignment]

    @property
    def satisfiable(self) -> bool:
        return self.witness is not None


UNSAT = SatResult(None)


def sat_conj(f1: Formula, f2: Formula, n: int) -> SatResult:
    """Exhaustive search for an assignment of x1..xn satisfying ``f1 & f2``.

    Both conjuncts share variables. Returns the lowest-index witness.
    """
    mask = satisfying_mask(f1, n) & satisfying_mask(f2, n)
    if not mask:
        return UNSAT
    lowest = (mask & -mask).bit_length() - 1
    return SatResult(Assignment.from_index(lowest, n))


def scope(*formulas: Formula, minimum: int = 1) -> int:
    """Smallest variable count covering every formula."""
    return max([minimum, *(max_variable(f) for f in formulas)])


# ---------------------------------------------------------------------------
# Text syntax
# ---------------------------------------------------------------------------


def to_text(formula: Formula) -> str:
    """Print with the fewest parentheses that parse back to the same tree."""
    match formula:
        case Const(value):
            return "T" if value else "F"
        case Var(index):
            return f"x{index}"
        case Not(child):
            inner = to_text(child)
            return f"!{inner}" if isinstance(child, (Const, Var, Not)) else f"!({inner})"
        case And(left, right):
            lhs = to_text(left)
            if isinstance(left, Or):
                lhs = f"({lhs})"
            rhs = to_text(right)
            if isinstance(right, (And, Or)):
                rhs = f"({rhs})"
            return f"{lhs}&{rhs}"
        case Or(left, right):
            rhs = to_text(right)
            if isinstance(right, Or):
                rhs = f"({rhs})"
            return f"{to_text(left)}|{rhs}"
    raise TypeError(f"not a formula: {formula!r}")


class _Parser:
    """Recursive descent over the formula grammar::

        or   := and ('|' and)*
        and  := not ('&' not)*
        not  := '!' not | atom
        atom := 'T' | 'F' | 'x' digits | '(' or ')'
    """

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def parse(self) -> Formula:
        formula = self._or()
        self._skip()
        if self.pos != len(self.text):
            raise FormulaSyntaxError(f"unexpected {self.text[self.pos]!r}", self.pos)
        return formula

    def _skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _or(self) -> Formula:
        result = self._and()
        while self._peek() == "|":
            self.pos += 1
            result = Or(result, self._and())
        return result

    def _and(self) -> Formula:
        result = self._not()
        while self._peek() == "&":
            self.pos += 1
            result = And(result, self._not())
        return result

    def _not(self) -> Formula:
        if self._peek() == "!":
            self.pos += 1
            return Not(self._not())
        return self._atom()

    def _atom(self) -> Formula:
        char = self._peek()
        if char == "(":
            self.pos += 1
            inner = self._or()
            if self._peek() != ")":
                raise FormulaSyntaxError("expected ')'", self.pos)
            self.pos += 1
            return inner
        if char in ("T", "F"):
            self.pos += 1
            return Const(char == "T")
        if char == "x":
            start = self.pos + 1
            end = start
            while end < len(self.text) and "0" <= self.text[end] <= "9":
                end += 1
            if end == start:
                raise FormulaSyntaxError("expected digits after 'x'", start)
            index = int(self.text[start:end])
            if index < 1:
                raise FormulaSyntaxError("variable indices start at 1", start)
            self.pos = end
            return Var(index)
        if not char:
            raise FormulaSyntaxError("unexpected end of formula", self.pos)
        raise FormulaSyntaxError(f"unexpected {char!r}", self.pos)


def parse_formula(text: str) -> Formula:
    return _Parser(text).parse()
