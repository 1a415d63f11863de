"""Knowledge base of named landmarks and detected objects.

Shared between the detection loop and the executor; every operation takes
the internal lock so readers never see a half-applied insert. Two modes:
Fixed (key set frozen at init) and Growing (detections may add entries).
Pre-loaded Initial entries are never overwritten by detections.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, replace
from enum import Enum


class KBMode(str, Enum):
    FIXED = "fixed"
    GROWING = "growing"


class EntrySource(str, Enum):
    INITIAL = "initial"
    DETECTED = "detected"


class DuplicateName(Exception):
    pass


def wrap_angle(theta: float) -> float:
    """Normalize an angle into (-pi, pi]. In-range values pass through
    unchanged so repeated wrapping never drifts."""
    if -math.pi < theta <= math.pi:
        return theta
    r = (theta + math.pi) % (2.0 * math.pi) - math.pi
    if r <= -math.pi:
        r += 2.0 * math.pi
    return r


@dataclass(frozen=True)
class Pose:
    """Planar position in meters plus heading in radians, (-pi, pi]."""

    x: float
    y: float
    theta: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError("pose coordinates must be finite")
        object.__setattr__(self, "theta", wrap_angle(self.theta))

    def distance_to(self, other: "Pose") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def to_dict(self) -> dict:
        return {"x": self.x, "y": self.y, "theta": self.theta}


@dataclass(frozen=True)
class KBEntry:
    name: str
    pose: Pose
    source: EntrySource
    detected_at: float | None = None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "x": self.pose.x,
            "y": self.pose.y,
            "theta": self.pose.theta,
            "source": self.source.value,
            "detected_at": self.detected_at,
        }


class KnowledgeBase:
    """Entity name -> KBEntry map with fixed/growing insert semantics."""

    def __init__(self, mode: KBMode = KBMode.GROWING):
        self.mode = mode
        self._entries: dict[str, KBEntry] = {}
        self._lock = threading.Lock()

    def __contains__(self, name: str) -> bool:
        with self._lock:
            return name in self._entries

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)


def kb_init(initial: list[KBEntry], mode: KBMode) -> KnowledgeBase:
    """Build a KB from unique, canonical Initial entries."""
    kb = KnowledgeBase(mode)
    for entry in initial:
        if entry.name in kb._entries:
            raise DuplicateName(entry.name)
        kb._entries[entry.name] = replace(
            entry, source=EntrySource.INITIAL, detected_at=None
        )
    return kb


def kb_insert(kb: KnowledgeBase, name: str, pose: Pose, time: float) -> bool:
    """Record a detection. Returns True iff the KB accepted it.

    Fixed mode rejects everything. Growing mode upserts with
    last-write-wins on the pose, except that Initial entries are
    immutable. detected_at keeps the first detection time so snapshot
    order stays stable while the pose tracks the latest sighting.
    """
    with kb._lock:
        if kb.mode is KBMode.FIXED:
            return False
        existing = kb._entries.get(name)
        if existing is not None and existing.source is EntrySource.INITIAL:
            return False
        detected_at = existing.detected_at if existing is not None else time
        kb._entries[name] = KBEntry(name, pose, EntrySource.DETECTED, detected_at)
        return True


def kb_lookup(kb: KnowledgeBase, name: str) -> Pose | None:
    """Pose of the named entry, or None when missing. Never mutates."""
    with kb._lock:
        entry = kb._entries.get(name)
        return entry.pose if entry is not None else None


def _ordered_entries(entries: dict[str, KBEntry]) -> list[KBEntry]:
    initial = [e for e in entries.values() if e.source is EntrySource.INITIAL]
    detected = sorted(
        (e for e in entries.values() if e.source is EntrySource.DETECTED),
        key=lambda e: (e.detected_at, e.name),
    )
    return initial + detected


def kb_snapshot(kb: KnowledgeBase) -> list[str]:
    """Entity names, Initial entries first (insertion order) then
    Detected entries ordered by first-detection time."""
    with kb._lock:
        return [e.name for e in _ordered_entries(kb._entries)]


def kb_entries(kb: KnowledgeBase) -> list[KBEntry]:
    """Entries in snapshot order, for serialization and the API."""
    with kb._lock:
        return _ordered_entries(kb._entries)


def kb_to_document(kb: KnowledgeBase) -> list[dict]:
    return [entry.to_dict() for entry in kb_entries(kb)]
