"""ISO-8601 UTC timestamps as the one time format used everywhere."""

from __future__ import annotations

from datetime import datetime, timedelta, timezone


def parse_ts(value: str) -> datetime:
    return datetime.fromisoformat(value.replace("Z", "+00:00"))


def format_ts(value: datetime) -> str:
    return value.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def add_hours(value: str, hours: float) -> str:
    return format_ts(parse_ts(value) + timedelta(hours=hours))


def hours_between(earlier: str, later: str) -> float:
    return (parse_ts(later) - parse_ts(earlier)).total_seconds() / 3600.0


def utc_now() -> str:
    return format_ts(datetime.now(timezone.utc))
