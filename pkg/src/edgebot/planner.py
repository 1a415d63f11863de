"""High-level planners: prompt assembly, rule-based template planner,
remote HTTP planner, and the plan grader.

The template planner is the deterministic stand-in for a compact
instruction-tuned model: it decomposes natural-language requests into
the subtask DSL with three patterns, checked in order of specificity.
It performs no knowledge-base validation; the executor is the gate for
unknown entities.
"""

from __future__ import annotations

import json
import re
import time
import urllib.error
import urllib.request
from dataclasses import dataclass, field

from .kb import KnowledgeBase, kb_snapshot
from .plan import (
    ActionKind,
    ParseError,
    Plan,
    SubTask,
    normalize_entity,
    parse_plan,
    serialize_plan,
)


class PlannerError(Exception):
    pass


class EmptyPrompt(PlannerError):
    pass


class NoPatternMatch(PlannerError):
    """The template planner recognized no task pattern in the prompt."""


class NetworkError(PlannerError):
    pass


class Timeout(NetworkError):
    pass


class HttpStatusError(NetworkError):
    def __init__(self, status: int, body: str = ""):
        self.status = status
        super().__init__(f"planner endpoint returned HTTP {status}")


SYSTEM_TEMPLATE = (
    "You control a mobile robot. Decompose the user's request into one "
    "subtask per line using exactly these forms: navigate(<target>), "
    "grab(<object>), drop(). Known landmarks and objects:"
)


@dataclass(frozen=True)
class PlannerRequest:
    system_header: str
    user_prompt: str
    planner_kind: str = "template"  # "template" or "remote"


@dataclass
class PlannerResponse:
    raw_text: str
    latency_sim_s: float = 0.0
    latency_wall_s: float | None = None
    plan: Plan | None = None
    parse_error: ParseError | None = None

    @property
    def ok(self) -> bool:
        return self.plan is not None


def build_prompt(
    kb: KnowledgeBase, user_text: str, planner_kind: str = "template"
) -> PlannerRequest:
    """Assemble the planning request: instruction template plus the
    current KB snapshot as the available-landmark list."""
    if not user_text.strip():
        raise EmptyPrompt("prompt text is empty")
    names = kb_snapshot(kb)
    header = SYSTEM_TEMPLATE + "\n" + "\n".join(names)
    return PlannerRequest(header, user_text, planner_kind)


# Words that end a navigation target when trailing context follows.
_STOPWORDS = r"to|and|because|so|then|if|while|where"
_ARTICLE = r"(?:the\s+|a\s+|an\s+)?"

_FETCH_RE = re.compile(
    rf"\bgo\s+to\s+{_ARTICLE}(.+?)\s+grab\s+(?:the|a|an)\s+(.+?)"
    rf"\s+and\s+(?:bring|take|move|carry)\s+it\s+to\s+{_ARTICLE}(.+?)$"
)
_CARRY_RE = re.compile(
    rf"\b(?:bring|take|move|carry)\s+the\s+(.+?)\s+to\s+{_ARTICLE}(.+?)$"
)
_GOTO_RE = re.compile(
    rf"\b(?:go|navigate)\s+to\s+{_ARTICLE}(.+?)"
    rf"(?:\s+(?:{_STOPWORDS})\s.*)?$"
)

_PUNCT_RE = re.compile(r"[,.;:!?\"()]")


def _normalize_prompt(text: str) -> str:
    text = _PUNCT_RE.sub(" ", text.lower())
    return " ".join(text.split())


def decompose(user_text: str) -> Plan:
    """Apply the template patterns to a prompt; first match wins.

    Raises NoPatternMatch when no pattern applies.
    """
    prompt = _normalize_prompt(user_text)
    m = _FETCH_RE.search(prompt)
    if m:
        place, obj, dest = (normalize_entity(g) for g in m.groups())
        return Plan((
            SubTask(ActionKind.NAVIGATE, place),
            SubTask(ActionKind.GRAB, obj),
            SubTask(ActionKind.NAVIGATE, dest),
            SubTask(ActionKind.DROP),
        ))
    m = _CARRY_RE.search(prompt)
    if m:
        obj, dest = (normalize_entity(g) for g in m.groups())
        return Plan((
            SubTask(ActionKind.NAVIGATE, obj),
            SubTask(ActionKind.GRAB, obj),
            SubTask(ActionKind.NAVIGATE, dest),
            SubTask(ActionKind.DROP),
        ))
    m = _GOTO_RE.search(prompt)
    if m:
        return Plan((SubTask(ActionKind.NAVIGATE, normalize_entity(m.group(1))),))
    raise NoPatternMatch(user_text[:80])


def template_plan(request: PlannerRequest) -> PlannerResponse:
    """Deterministic rule-based planning. latency_sim_s is filled in by
    the runtime from the active resource profile."""
    plan = decompose(request.user_prompt)  # NoPatternMatch propagates
    text = serialize_plan(plan)
    return PlannerResponse(raw_text=text, plan=plan)


def remote_plan(
    endpoint: str, request: PlannerRequest, timeout: float = 30.0
) -> PlannerResponse:
    """POST the request to a remote planner and parse its completion.

    Wire format: request {"system_header", "prompt"}, response {"text"}.
    Network problems raise NetworkError subclasses; a completion that is
    not valid DSL comes back as a response with parse_error set.
    """
    body = json.dumps(
        {"system_header": request.system_header, "prompt": request.user_prompt}
    ).encode("utf-8")
    req = urllib.request.Request(
        endpoint, data=body, headers={"Content-Type": "application/json"}
    )
    t0 = time.monotonic()
    try:
        with urllib.request.urlopen(req, timeout=timeout) as resp:
            payload = json.loads(resp.read().decode("utf-8"))
    except urllib.error.HTTPError as exc:
        raise HttpStatusError(exc.code) from exc
    except TimeoutError as exc:
        raise Timeout(str(exc)) from exc
    except urllib.error.URLError as exc:
        if isinstance(exc.reason, TimeoutError):
            raise Timeout(str(exc.reason)) from exc
        raise NetworkError(str(exc.reason)) from exc
    except (OSError, json.JSONDecodeError) as exc:
        raise NetworkError(str(exc)) from exc
    wall = time.monotonic() - t0
    text = payload.get("text", "")
    response = PlannerResponse(raw_text=text, latency_wall_s=wall)
    try:
        response.plan = parse_plan(text)
    except ParseError as exc:
        response.parse_error = exc
    return response


@dataclass(frozen=True)
class Score:
    matched: int
    total: int

    def __post_init__(self):
        if not (0 <= self.matched <= self.total):
            raise ValueError("matched must be within [0, total]")

    def __str__(self) -> str:
        return f"{self.matched}/{self.total}"

    def to_dict(self) -> dict:
        return {"matched": self.matched, "total": self.total}


def grade(expected: Plan, raw_actual: str) -> Score:
    """Per-position credit of a raw planner output against the expected
    plan. Unparseable output scores zero."""
    if len(expected) == 0:
        raise ValueError("expected plan must be non-empty")
    total = len(expected)
    try:
        actual = parse_plan(raw_actual)
    except ParseError:
        return Score(0, total)
    matched = sum(
        1
        for i in range(min(len(actual), total))
        if actual[i] == expected[i]
    )
    return Score(matched, total)
