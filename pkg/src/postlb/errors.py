# SPDX-License-Identifier: Apache-2.0
"""
Exception hierarchy shared by every postlb module.

Everything a user can trigger with bad input derives from ``PostLBError``;
the CLI maps that root to exit status 1. ``InternalConsistencyError`` marks
conditions that can only arise from a bug in the simulator or the analysis
(for instance a crossed run leaving the collision path).
"""

from typing import Optional


class PostLBError(Exception):
    """Root of all postlb domain errors."""

    error_type: str = "postlb_error"


class ProgramSyntaxError(PostLBError, ValueError):
    """A program source line could not be parsed."""

    error_type = "program_syntax_error"

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class ProgramStructureError(PostLBError, ValueError):
    """Duplicate addresses, numbering gaps or dangling jump targets."""

    error_type = "program_structure_error"

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class ApplicabilityError(PostLBError):
    """Mark on a marked box or unmark on a blank box."""

    error_type = "applicability_error"

    def __init__(self, address: int, step: int, head: int, opcode: str):
        self.address = address
        self.step = step
        self.head = head
        self.opcode = opcode
        super().__init__(
            f"{opcode} at address {address} is inapplicable to box {head} "
            f"(step {step})"
        )


class TraceError(PostLBError):
    """A trace does not respect the program's successor relation."""

    error_type = "trace_error"


class ConventionError(PostLBError, ValueError):
    """A symbol space convention is malformed or unusable for a run."""

    error_type = "convention_error"


class ConfigurationError(PostLBError, ValueError):
    """The configuration file or POSTLB_SEED is invalid."""

    error_type = "configuration_error"


class LayoutError(PostLBError, ValueError):
    """A bipartite input does not fit its partitions."""

    error_type = "layout_error"


class FormulaSyntaxError(PostLBError, ValueError):
    """Formula text could not be parsed."""

    error_type = "formula_syntax_error"

    def __init__(self, message: str, position: Optional[int] = None):
        self.position = position
        super().__init__(
            f"{message} at position {position}" if position is not None else message
        )


class ArityError(PostLBError, ValueError):
    """A variable index or arity is outside the supported range."""

    error_type = "arity_error"


class NotCnfError(PostLBError, ValueError):
    """A formula is not an AND of ORs of literals."""

    error_type = "not_cnf_error"


class ReductionError(PostLBError, ValueError):
    """The 3CNF reduction cannot honour its fresh-variable layout."""

    error_type = "reduction_error"


class EncodingError(PostLBError, ValueError):
    """A box-state string does not decode."""

    error_type = "encoding_error"


class FramingError(EncodingError):
    """Length is not a multiple of the symbol width."""

    error_type = "framing_error"


class UnknownPatternError(EncodingError):
    """A chunk matches no symbol of the code table."""

    error_type = "unknown_pattern_error"

    def __init__(self, chunk: str, offset: int):
        self.chunk = chunk
        self.offset = offset
        super().__init__(f"unknown pattern {chunk!r} at box offset {offset}")


class FamilyNotCleanError(PostLBError):
    """Collision search was asked for on a family that has a violation."""

    error_type = "family_not_clean"


class InternalConsistencyError(PostLBError):
    """A proven property failed; the simulator or analysis has a bug."""

    error_type = "internal_consistency_error"


class Lemma2ViolationError(InternalConsistencyError):
    """A crossed run did not follow the shared terminated path."""

    error_type = "lemma2_violation"


class PigeonholeError(InternalConsistencyError):
    """A clean family produced more distinct paths than the branch budget allows."""

    error_type = "pigeonhole_error"


class VerificationError(InternalConsistencyError):
    """Re-simulation or the oracle disagrees with a reported outcome."""

    error_type = "verification_error"
