"""Subtask plan language: parsing, serialization, and entity normalization.

A plan is a sequence of lines, one subtask per line:

    navigate(<target>)
    grab(<target>)
    drop()

Parsing is strict and all-or-nothing: any non-blank line that does not
match the grammar fails the whole parse. Free prose from a planner is a
planning failure, never a partial plan.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum


class ActionKind(str, Enum):
    NAVIGATE = "navigate"
    GRAB = "grab"
    DROP = "drop"


_ACTIONS_WITH_TARGET = {ActionKind.NAVIGATE, ActionKind.GRAB}

# Leading articles stripped during normalization.
_ARTICLES = ("the", "a", "an")

# Dash variants (hyphen, en dash, em dash) all normalize to a space.
_DASHES_RE = re.compile(r"[-_‐‑‒–—―]+")
_WS_RE = re.compile(r"\s+")

_LINE_RE = re.compile(r"^\s*([A-Za-z_][A-Za-z_\- ]*?)\s*\(\s*([^()]*?)\s*\)\s*$")


class PlanLanguageError(Exception):
    """Base class for plan-language errors."""


class EmptyEntity(PlanLanguageError):
    """Raised when normalization leaves nothing of an entity name."""


@dataclass(frozen=True)
class ParseReason:
    UNKNOWN_ACTION = "unknown_action"
    MISSING_ARGUMENT = "missing_argument"
    UNEXPECTED_ARGUMENT = "unexpected_argument"
    MALFORMED_LINE = "malformed_line"
    EMPTY_INPUT = "empty_input"


class ParseError(PlanLanguageError):
    """Strict-parse failure; carries the offending line and a reason code."""

    def __init__(self, line_number: int, reason: str, detail: str = ""):
        self.line_number = line_number
        self.reason = reason
        self.detail = detail
        msg = f"line {line_number}: {reason}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)

    def to_dict(self) -> dict:
        return {
            "line_number": self.line_number,
            "reason": self.reason,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class SubTask:
    """One atomic action. Navigate/Grab carry a target; Drop never does."""

    kind: ActionKind
    target: str | None = None

    def __post_init__(self):
        if self.kind in _ACTIONS_WITH_TARGET:
            if not self.target:
                raise ValueError(f"{self.kind.value} requires a target")
        elif self.target is not None:
            raise ValueError("drop takes no target")

    def __str__(self) -> str:
        if self.kind is ActionKind.DROP:
            return "drop()"
        return f"{self.kind.value}({self.target})"


def navigate(target: str) -> SubTask:
    return SubTask(ActionKind.NAVIGATE, normalize_entity(target))


def grab(target: str) -> SubTask:
    return SubTask(ActionKind.GRAB, normalize_entity(target))


def drop() -> SubTask:
    return SubTask(ActionKind.DROP)


@dataclass(frozen=True)
class Plan:
    """Ordered subtask list. Empty only as an explicit no-plan result."""

    subtasks: tuple[SubTask, ...] = ()

    def __len__(self) -> int:
        return len(self.subtasks)

    def __iter__(self):
        return iter(self.subtasks)

    def __getitem__(self, i):
        return self.subtasks[i]

    def is_manipulation(self) -> bool:
        """True if any subtask grabs or drops (vs pure navigation)."""
        return any(s.kind in (ActionKind.GRAB, ActionKind.DROP) for s in self.subtasks)

    def lines(self) -> list[str]:
        return [str(s) for s in self.subtasks]


def normalize_entity(raw: str) -> str:
    """Canonicalize an entity name.

    Lowercase, dash/underscore variants become single spaces, leading
    articles are stripped, interior whitespace collapses to one space.
    Raises EmptyEntity if nothing remains.
    """
    text = _DASHES_RE.sub(" ", raw.lower())
    words = [w for w in _WS_RE.split(text) if w]
    while words and words[0] in _ARTICLES:
        words = words[1:]
    if not words:
        raise EmptyEntity(f"entity name empty after normalization: {raw!r}")
    return " ".join(words)


def parse_plan(text: str) -> Plan:
    """Parse planner output into a Plan; raise ParseError on any bad line.

    Blank lines are skipped. Action keywords are case-insensitive. A
    wholly blank input is an error (empty_input), not an empty plan.
    """
    subtasks: list[SubTask] = []
    saw_content = False
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        saw_content = True
        m = _LINE_RE.match(line)
        if m is None:
            raise ParseError(lineno, ParseReason.MALFORMED_LINE, line.strip()[:80])
        action_raw, arg_raw = m.group(1).lower(), m.group(2)
        try:
            kind = ActionKind(action_raw)
        except ValueError:
            raise ParseError(lineno, ParseReason.UNKNOWN_ACTION, action_raw) from None
        if kind is ActionKind.DROP:
            if arg_raw:
                raise ParseError(lineno, ParseReason.UNEXPECTED_ARGUMENT, arg_raw)
            subtasks.append(SubTask(kind))
        else:
            if not arg_raw.strip():
                raise ParseError(lineno, ParseReason.MISSING_ARGUMENT, action_raw)
            try:
                target = normalize_entity(arg_raw)
            except EmptyEntity:
                raise ParseError(lineno, ParseReason.MISSING_ARGUMENT, arg_raw) from None
            subtasks.append(SubTask(kind, target))
    if not saw_content:
        raise ParseError(1, ParseReason.EMPTY_INPUT)
    return Plan(tuple(subtasks))


def serialize_plan(plan: Plan) -> str:
    """Inverse of parse_plan: one line per subtask."""
    return "\n".join(plan.lines())
