"""Append-only engagement-event stores.

One JSONL file per campaign on disk; an in-memory variant backs fast
property tests. Appends are atomic per event (single write + flush of a
complete line) and event ids must be strictly increasing per campaign.
"""

from __future__ import annotations

import json
import threading
from pathlib import Path
from typing import Protocol

from ..bots.types import EngagementEvent


class EventStore(Protocol):
    def read(self, campaign_id: str) -> list[EngagementEvent]: ...

    def append(self, event: EngagementEvent) -> None: ...

    def append_all(self, events) -> None: ...


class _OrderGuardMixin:
    _last_ids: dict

    def _check_order(self, event: EngagementEvent) -> None:
        last = self._last_ids.get(event.campaign_id, 0)
        if event.event_id <= last:
            raise ValueError(
                f"event id {event.event_id} not increasing for {event.campaign_id} "
                f"(last {last})"
            )
        self._last_ids[event.campaign_id] = event.event_id


class InMemoryEventStore(_OrderGuardMixin):
    def __init__(self):
        self._events: dict[str, list[EngagementEvent]] = {}
        self._last_ids: dict[str, int] = {}

    def read(self, campaign_id: str) -> list[EngagementEvent]:
        return list(self._events.get(campaign_id, []))

    def append(self, event: EngagementEvent) -> None:
        self._check_order(event)
        self._events.setdefault(event.campaign_id, []).append(event)

    def append_all(self, events) -> None:
        for event in events:
            self.append(event)


class FileEventStore(_OrderGuardMixin):
    """campaigns/<campaign_id>/events.jsonl under a data directory."""

    def __init__(self, data_dir: Path):
        self.data_dir = Path(data_dir)
        self._last_ids: dict[str, int] = {}
        self._lock = threading.Lock()

    def _path(self, campaign_id: str) -> Path:
        return self.data_dir / "campaigns" / campaign_id / "events.jsonl"

    def read(self, campaign_id: str) -> list[EngagementEvent]:
        path = self._path(campaign_id)
        if not path.exists():
            return []
        events = read_event_file(path)
        if events:
            self._last_ids.setdefault(campaign_id, events[-1].event_id)
        return events

    def append(self, event: EngagementEvent) -> None:
        with self._lock:
            path = self._path(event.campaign_id)
            if event.campaign_id not in self._last_ids and path.exists():
                existing = read_event_file(path)
                self._last_ids[event.campaign_id] = (
                    existing[-1].event_id if existing else 0
                )
            self._check_order(event)
            path.parent.mkdir(parents=True, exist_ok=True)
            with path.open("a") as fh:
                fh.write(json.dumps(event.to_doc(), sort_keys=True) + "\n")
                fh.flush()

    def append_all(self, events) -> None:
        for event in events:
            self.append(event)


def read_event_file(path: Path) -> list[EngagementEvent]:
    """Parse a JSONL event log (also used for standalone replay fixtures)."""
    events = []
    with Path(path).open() as fh:
        for line in fh:
            line = line.strip()
            if line:
                events.append(EngagementEvent.from_doc(json.loads(line)))
    return events
