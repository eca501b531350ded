# SPDX-License-Identifier: Apache-2.0
"""
Symbol space conventions for runs on bipartite inputs.

A convention fixes the initial head position, splits the tape into two
disjoint partitions at ``split`` (first partition: addresses below it),
anchors each input part inside its partition, and names the box whose state
at halt is the machine's answer.
"""

import logging
from enum import StrEnum
from typing import Annotated, Optional

from pydantic import AfterValidator, BaseModel, ConfigDict, Field, ValidationError, model_validator

from postlb.errors import ConventionError, LayoutError
from postlb.machine import SymbolSpace

logger = logging.getLogger(__name__)

BOX_ALPHABET = frozenset("bm")


class PartitionId(StrEnum):
    FIRST = "first"
    SECOND = "second"


class Verdict(StrEnum):
    ACCEPT = "accept"
    REJECT = "reject"
    UNDECIDED = "undecided"

    def opposite(self) -> "Verdict":
        if self is Verdict.ACCEPT:
            return Verdict.REJECT
        if self is Verdict.REJECT:
            return Verdict.ACCEPT
        raise ValueError("an undecided verdict has no opposite")


def _check_boxes(value: str) -> str:
    if not value:
        raise ValueError("box-state string must be non-empty")
    if not set(value) <= BOX_ALPHABET:
        raise ValueError(f"box-state string may only contain 'b' and 'm', got {value!r}")
    return value


BoxString = Annotated[str, AfterValidator(_check_boxes)]


class BipartiteInput(BaseModel):
    """Two box-state strings, one per partition."""

    model_config = ConfigDict(frozen=True)

    first: BoxString
    second: BoxString

    @classmethod
    def from_text(cls, text: str) -> "BipartiteInput":
        """Parse the two-line ``first: ...`` / ``second: ...`` file format."""
        parts: dict[str, str] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition(":")
            key = key.strip().lower()
            if not sep or key not in ("first", "second"):
                raise LayoutError(f"line {lineno}: expected 'first: ...' or 'second: ...'")
            if key in parts:
                raise LayoutError(f"line {lineno}: duplicate '{key}' part")
            parts[key] = value.strip()
        missing = {"first", "second"} - parts.keys()
        if missing:
            raise LayoutError(f"bipartite input is missing: {', '.join(sorted(missing))}")
        try:
            return cls(**parts)
        except ValidationError as exc:
            raise LayoutError(str(exc)) from exc

    def render(self) -> str:
        return f"first: {self.first}\nsecond: {self.second}\n"


class Convention(BaseModel):
    """Symbol space convention shared by every run of a machine.

    The defaults place the head at 0, give the first partition the negative
    addresses, end the first part at -1, start the second part at 0, and read
    the answer from box 0 (marked means accept).
    """

    model_config = ConfigDict(frozen=True)

    initial_head: int = 0
    split: int = 0
    first_anchor: int = -1
    second_anchor: int = 0
    answer_box: int = 0
    answer_marked_means: Verdict = Verdict.ACCEPT
    partition_capacity: Optional[int] = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _anchors_inside_partitions(self) -> "Convention":
        if not self.first_anchor < self.split:
            raise ValueError(
                f"first_anchor ({self.first_anchor}) must lie below split ({self.split})"
            )
        if not self.second_anchor >= self.split:
            raise ValueError(
                f"second_anchor ({self.second_anchor}) must not lie below split ({self.split})"
            )
        if self.answer_marked_means is Verdict.UNDECIDED:
            raise ValueError("answer_marked_means must be accept or reject")
        return self

    @classmethod
    def from_text(cls, text: str) -> "Convention":
        """Parse ``key=value`` lines; unspecified fields keep their defaults."""
        values: dict[str, str] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key = key.strip()
            if not sep or key not in cls.model_fields:
                raise ConventionError(f"line {lineno}: unknown convention entry {line!r}")
            values[key] = value.strip().lower() if key == "answer_marked_means" else value.strip()
        try:
            return cls(**values)
        except ValidationError as exc:
            raise ConventionError(str(exc)) from exc

    def render(self) -> str:
        lines = [
            f"initial_head={self.initial_head}",
            f"split={self.split}",
            f"first_anchor={self.first_anchor}",
            f"second_anchor={self.second_anchor}",
            f"answer_box={self.answer_box}",
            f"answer_marked_means={self.answer_marked_means.value}",
        ]
        if self.partition_capacity is not None:
            lines.append(f"partition_capacity={self.partition_capacity}")
        return "\n".join(lines) + "\n"

    def first_start(self, length: int) -> int:
        """Address of the leftmost box of a first part of ``length`` boxes."""
        return self.first_anchor - length + 1


def layout(input: BipartiteInput, conv: Convention) -> SymbolSpace:
    """Lay both parts out on a fresh tape; every other box is blank."""
    cap = conv.partition_capacity
    for name, part in (("first", input.first), ("second", input.second)):
        if cap is not None and len(part) > cap:
            raise LayoutError(
                f"{name} part has {len(part)} boxes but the partition holds {cap}"
            )

    marked = {
        conv.first_start(len(input.first)) + i
        for i, box in enumerate(input.first)
        if box == "m"
    }
    marked.update(conv.second_anchor + i for i, box in enumerate(input.second) if box == "m")
    return SymbolSpace(marked)


def partition_of(conv: Convention, address: int) -> PartitionId:
    return PartitionId.FIRST if address < conv.split else PartitionId.SECOND


def read_verdict(conv: Convention, space: SymbolSpace) -> Verdict:
    """Answer encoded in ``answer_box`` once the machine has halted."""
    if space.is_marked(conv.answer_box):
        return conv.answer_marked_means
    return conv.answer_marked_means.opposite()


TABLE1_CONVENTION = Convention(
    initial_head=15, split=15, first_anchor=14, second_anchor=15, answer_box=15
)
