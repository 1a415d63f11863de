"""Append-only event stream with fan-out to live subscribers.

Every state change in a run is announced here before it becomes visible
through snapshots, which is what lets the UI replay a run and what makes
headless runs auditable. Events are plain dicts {seq, type, t, payload}.
"""

from __future__ import annotations

import queue
import threading


class EventBus:
    def __init__(self):
        self._lock = threading.Lock()
        self._history: list[dict] = []
        self._subscribers: list[queue.Queue] = []

    def emit(self, type_: str, t: float, payload: dict) -> dict:
        with self._lock:
            event = {
                "seq": len(self._history),
                "type": type_,
                "t": t,
                "payload": payload,
            }
            self._history.append(event)
            for q in self._subscribers:
                q.put(event)
        return event

    def subscribe(self, since: int = 0) -> queue.Queue:
        """Queue receiving every event with seq >= since, replay included."""
        q: queue.Queue = queue.Queue()
        with self._lock:
            for event in self._history[since:]:
                q.put(event)
            self._subscribers.append(q)
        return q

    def unsubscribe(self, q: queue.Queue) -> None:
        with self._lock:
            if q in self._subscribers:
                self._subscribers.remove(q)

    def history(self, since: int = 0) -> list[dict]:
        with self._lock:
            return list(self._history[since:])
