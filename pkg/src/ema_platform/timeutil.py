"""UTC instant helpers.

All timestamps in the platform are timezone-aware UTC datetimes, carried
on the wire as ISO-8601 strings with a ``Z`` suffix.  Python 3.10's
``fromisoformat`` does not accept ``Z``, hence the wrappers here.
"""

from __future__ import annotations

from datetime import date, datetime, timezone

UTC = timezone.utc


def now_utc() -> datetime:
    return datetime.now(UTC)


def parse_instant(text: str) -> datetime:
    """Parse an ISO-8601 instant; naive input is taken as UTC."""
    if text.endswith("Z") or text.endswith("z"):
        text = text[:-1] + "+00:00"
    dt = datetime.fromisoformat(text)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=UTC)
    return dt.astimezone(UTC)


def format_instant(dt: datetime) -> str:
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=UTC)
    dt = dt.astimezone(UTC).replace(microsecond=0)
    return dt.strftime("%Y-%m-%dT%H:%M:%SZ")


def parse_date(text: str) -> date:
    """Parse an extended ISO-8601 calendar date (YYYY-MM-DD), strictly."""
    if len(text) != 10 or text[4] != "-" or text[7] != "-":
        raise ValueError(f"not a calendar date: {text!r}")
    return date.fromisoformat(text)
