"""Notification schedules: when a questionnaire next asks to be filled out.

A schedule lives inside a questionnaire document under the ``schedule``
key and is computed in the participant's local civil time.  The
occurrence instant is the window start; when a DST gap swallows the
window start, the occurrence shifts to the first local minute of the
window that exists that day.

Wire form::

    {"recurrence": {"kind": "daily"}, "window": {"start": "18:00", "end": "20:00"}}
    {"recurrence": {"kind": "every_n_days", "n": 3, "anchor": "2026-01-05"}}
    {"recurrence": {"kind": "weekly", "weekdays": ["mon", "thu"]}}
    {"recurrence": {"kind": "once", "date": "2026-09-01"}}
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date, datetime, time, timedelta
from zoneinfo import ZoneInfo, ZoneInfoNotFoundError

from .errors import Defect, InvalidZoneError, ScheduleExhaustedError, ValidationError
from .timeutil import UTC, parse_date

WEEKDAY_NAMES = ("mon", "tue", "wed", "thu", "fri", "sat", "sun")

# Hard cap on the day scan, > 27 years; protects against pathological
# every_n_days periods that never match inside a query horizon.
_MAX_DAY_SCAN = 10_000


@dataclass(frozen=True)
class Recurrence:
    """Tagged union over the supported recurrence kinds.

    kind = daily | every_n_days | weekly | once.  ``n`` and ``anchor``
    apply to every_n_days, ``weekdays`` (set of 0=Mon .. 6=Sun) to
    weekly, ``on`` to once.
    """

    kind: str
    n: int | None = None
    anchor: date | None = None
    weekdays: frozenset[int] = frozenset()
    on: date | None = None

    def matches(self, day: date, anchor: date | None) -> bool:
        if self.kind == "daily":
            return True
        if self.kind == "weekly":
            return day.weekday() in self.weekdays
        if self.kind == "every_n_days":
            base = self.anchor or anchor
            if base is None:
                raise ValueError("every_n_days schedule needs an anchor date")
            return day >= base and (day - base).days % self.n == 0
        if self.kind == "once":
            return day == self.on
        raise ValueError(f"unknown recurrence kind {self.kind!r}")


@dataclass(frozen=True)
class Window:
    start: time  # minutes resolution
    end: time

    def minutes(self) -> range:
        return range(
            self.start.hour * 60 + self.start.minute,
            self.end.hour * 60 + self.end.minute + 1,
        )


@dataclass(frozen=True)
class ScheduleSpec:
    recurrence: Recurrence
    window: Window
    questionnaire_id: str | None = None


def parse_schedule(raw: dict, questionnaire_id: str | None = None) -> ScheduleSpec:
    """Parse the ``schedule`` sub-document; raises ValidationError with the
    complete defect list."""
    defects: list[Defect] = []

    def bad(msg: str) -> None:
        defects.append(Defect("invalid-schedule", msg, subject=questionnaire_id))

    recurrence = None
    rec = raw.get("recurrence")
    if not isinstance(rec, dict) or "kind" not in rec:
        bad("schedule.recurrence must be an object with a 'kind'")
    else:
        kind = rec.get("kind")
        if kind == "daily":
            recurrence = Recurrence("daily")
        elif kind == "every_n_days":
            n = rec.get("n")
            if not isinstance(n, int) or isinstance(n, bool) or n < 1:
                bad("every_n_days needs integer n >= 1")
            else:
                anchor = None
                if "anchor" in rec:
                    try:
                        anchor = parse_date(rec["anchor"])
                    except (ValueError, TypeError):
                        bad("every_n_days anchor must be a calendar date")
                recurrence = Recurrence("every_n_days", n=n, anchor=anchor)
        elif kind == "weekly":
            days = rec.get("weekdays")
            if not isinstance(days, list) or not days:
                bad("weekly needs a non-empty weekdays list")
            else:
                indices = set()
                for d in days:
                    if d not in WEEKDAY_NAMES:
                        bad(f"unknown weekday {d!r}")
                    else:
                        indices.add(WEEKDAY_NAMES.index(d))
                if indices:
                    recurrence = Recurrence("weekly", weekdays=frozenset(indices))
        elif kind == "once":
            try:
                on = parse_date(rec.get("date", ""))
                recurrence = Recurrence("once", on=on)
            except (ValueError, TypeError):
                bad("once needs a 'date' calendar date")
        else:
            bad(f"unknown recurrence kind {kind!r}")

    window = None
    win = raw.get("window")
    if not isinstance(win, dict):
        bad("schedule.window must be an object with 'start' and 'end'")
    else:
        try:
            start = _parse_hhmm(win.get("start", ""))
            end = _parse_hhmm(win.get("end", ""))
            if start > end:
                bad("window start must not be after end")
            else:
                window = Window(start, end)
        except ValueError:
            bad("window times must be HH:MM")

    if defects or recurrence is None or window is None:
        raise ValidationError(defects or [Defect("invalid-schedule", "unparseable schedule")])
    return ScheduleSpec(recurrence, window, questionnaire_id)


def serialize_schedule(spec: ScheduleSpec) -> dict:
    rec: dict = {"kind": spec.recurrence.kind}
    if spec.recurrence.kind == "every_n_days":
        rec["n"] = spec.recurrence.n
        if spec.recurrence.anchor:
            rec["anchor"] = spec.recurrence.anchor.isoformat()
    elif spec.recurrence.kind == "weekly":
        rec["weekdays"] = [WEEKDAY_NAMES[i] for i in sorted(spec.recurrence.weekdays)]
    elif spec.recurrence.kind == "once":
        rec["date"] = spec.recurrence.on.isoformat()
    return {
        "recurrence": rec,
        "window": {
            "start": spec.window.start.strftime("%H:%M"),
            "end": spec.window.end.strftime("%H:%M"),
        },
    }


def _parse_hhmm(text: str) -> time:
    if not isinstance(text, str) or len(text) != 5 or text[2] != ":":
        raise ValueError(f"bad time {text!r}")
    return time(int(text[:2]), int(text[3:5]))


def _zone(zone_id: str) -> ZoneInfo:
    try:
        return ZoneInfo(zone_id)
    except (ZoneInfoNotFoundError, ValueError) as exc:
        raise InvalidZoneError(f"unknown timezone {zone_id!r}") from exc


def occurrence_on(spec: ScheduleSpec, day: date, zone: ZoneInfo) -> datetime | None:
    """UTC instant of the occurrence on a given local date, or None.

    The occurrence is the first minute of the window that exists as a
    local wall time that day (the window start except across a DST gap);
    for ambiguous wall times the earlier instant wins.
    """
    for minute in spec.window.minutes():
        local = datetime.combine(day, time(minute // 60, minute % 60), tzinfo=zone)
        utc = local.astimezone(UTC)
        back = utc.astimezone(zone)
        if back.date() == day and back.hour == minute // 60 and back.minute == minute % 60:
            return utc
    return None


def next_occurrences(
    spec: ScheduleSpec,
    after: datetime,
    zone_id: str,
    n: int,
    anchor: date | None = None,
) -> list[datetime]:
    """The next ``n`` occurrence instants strictly after ``after``.

    ``anchor`` supplies the every_n_days reference date when the spec does
    not embed one (callers typically pass the membership join date).
    Raises ScheduleExhaustedError when a ``once`` schedule lies entirely
    in the past.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    zone = _zone(zone_id)
    if after.tzinfo is None:
        after = after.replace(tzinfo=UTC)

    out: list[datetime] = []
    # Start one day early: zones with midnight transitions make the exact
    # wall date of `after` an unreliable lower bound.
    day = after.astimezone(zone).date() - timedelta(days=1)
    for _ in range(_MAX_DAY_SCAN):
        if spec.recurrence.matches(day, anchor):
            occ = occurrence_on(spec, day, zone)
            if occ is not None and occ > after:
                out.append(occ)
                if len(out) == n:
                    return out
        if spec.recurrence.kind == "once" and day > (spec.recurrence.on or day):
            break
        day += timedelta(days=1)
    if not out and spec.recurrence.kind == "once":
        raise ScheduleExhaustedError("the once-off occurrence has already passed")
    return out


def previous_occurrence(
    spec: ScheduleSpec,
    at: datetime,
    zone_id: str,
    anchor: date | None = None,
    lookback_days: int = 60,
) -> datetime | None:
    """Most recent occurrence instant at or before ``at`` (None if the
    schedule produced nothing inside the lookback horizon)."""
    zone = _zone(zone_id)
    if at.tzinfo is None:
        at = at.replace(tzinfo=UTC)
    if (
        spec.recurrence.kind == "every_n_days"
        and anchor is None
        and spec.recurrence.anchor is None
    ):
        return None
    day = at.astimezone(zone).date() + timedelta(days=1)
    for _ in range(lookback_days):
        if spec.recurrence.matches(day, anchor):
            occ = occurrence_on(spec, day, zone)
            if occ is not None and occ <= at:
                return occ
        day -= timedelta(days=1)
    return None
