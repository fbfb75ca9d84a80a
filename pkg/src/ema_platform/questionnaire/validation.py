"""Answer-sheet validation against the exact referenced questionnaire version.

Produces a complete ValidationReport: every defect is listed, with codes

    missing-required, type-mismatch, value-not-in-options, count-bounds,
    text-length, date-range, unknown-element, static-answered,
    malformed-date, clock-skew

An accepted report has zero defects; nothing else counts as accepted.
"""

from __future__ import annotations

from datetime import timedelta

from ..errors import Defect, VersionMismatchError
from ..timeutil import parse_date
from .model import (
    SINGLE_VALUE_CHOICE_KINDS,
    AnswerSheet,
    Element,
    QuestionnaireDoc,
    ValidationReport,
)

# Client clocks may lag arbitrarily (offline submission) but may not lead
# the server by more than this; beyond it the sheet is treated as corrupt.
CLOCK_SKEW_ALLOWANCE = timedelta(hours=24)


def validate_answer_sheet(sheet: AnswerSheet, doc: QuestionnaireDoc) -> ValidationReport:
    """Validate a sheet against the questionnaire version it references.

    Raises VersionMismatchError when the caller hands a document that is
    not the (id, version) the sheet names; that is a caller bug, distinct
    from a rejection of user data.
    """
    if doc.id != sheet.questionnaire_id or doc.version != sheet.questionnaire_version:
        raise VersionMismatchError(
            f"sheet targets {sheet.questionnaire_id!r} v{sheet.questionnaire_version}, "
            f"got document {doc.id!r} v{doc.version}"
        )

    defects: list[Defect] = []

    if sheet.client_submitted_at > sheet.server_received_at + CLOCK_SKEW_ALLOWANCE:
        defects.append(
            Defect(
                "clock-skew",
                "client timestamp lies more than 24h in the server's future",
            )
        )

    elements = {el.id: el for page in doc.pages for el in page.elements}

    for element_id, value in sheet.answers.items():
        el = elements.get(element_id)
        if el is None:
            defects.append(
                Defect("unknown-element", f"no element {element_id!r} in this version", subject=element_id)
            )
            continue
        if el.kind == "static_text":
            defects.append(
                Defect("static-answered", "static_text elements take no answers", subject=element_id)
            )
            continue
        defects.extend(_check_value(el, value))

    for element_id, el in elements.items():
        if el.required and el.kind != "static_text" and element_id not in sheet.answers:
            defects.append(
                Defect("missing-required", f"required element {element_id!r} unanswered", subject=element_id)
            )

    return ValidationReport(defects=tuple(defects))


def _check_value(el: Element, value: object) -> list[Defect]:
    if el.kind in SINGLE_VALUE_CHOICE_KINDS:
        if not isinstance(value, str):
            return [_mismatch(el, "expected one value-code string")]
        if value not in el.option_values:
            return [
                Defect("value-not-in-options", f"{value!r} is not an option of {el.id!r}", subject=el.id)
            ]
        return []

    if el.kind == "multiple_choice":
        if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
            return [_mismatch(el, "expected a list of value-code strings")]
        defects = []
        if len(set(value)) != len(value):
            defects.append(_mismatch(el, "duplicate value-codes in selection"))
        for v in value:
            if v not in el.option_values:
                defects.append(
                    Defect("value-not-in-options", f"{v!r} is not an option of {el.id!r}", subject=el.id)
                )
        count = len(set(value))
        c = el.constraints
        lo = c.min_selected if c and c.min_selected is not None else None
        hi = c.max_selected if c and c.max_selected is not None else None
        if (lo is not None and count < lo) or (hi is not None and count > hi):
            defects.append(
                Defect("count-bounds", f"{count} selected, allowed {lo or 0}..{hi if hi is not None else 'n'}", subject=el.id)
            )
        return defects

    if el.kind == "text":
        if not isinstance(value, str):
            return [_mismatch(el, "expected a string")]
        if len(value) > el.text_max_length:
            return [
                Defect("text-length", f"{len(value)} chars exceeds limit {el.text_max_length}", subject=el.id)
            ]
        return []

    if el.kind == "date":
        if not isinstance(value, str):
            return [_mismatch(el, "expected an ISO calendar date string")]
        try:
            d = parse_date(value)
        except ValueError:
            return [Defect("malformed-date", f"{value!r} is not a calendar date", subject=el.id)]
        c = el.constraints
        if c and ((c.min_date and d < c.min_date) or (c.max_date and d > c.max_date)):
            return [
                Defect("date-range", f"{value} outside {c.min_date}..{c.max_date}", subject=el.id)
            ]
        return []

    raise AssertionError(f"unhandled kind {el.kind}")


def _mismatch(el: Element, why: str) -> Defect:
    return Defect("type-mismatch", f"{el.id!r} ({el.kind}): {why}", subject=el.id)


def canonical_answers(sheet: AnswerSheet, doc: QuestionnaireDoc) -> dict[str, object]:
    """Canonical storage form of an accepted sheet's answers:
    multiple_choice selections become sorted lists, everything else is
    kept verbatim."""
    out: dict[str, object] = {}
    for element_id, value in sheet.answers.items():
        el = doc.element(element_id)
        if el is not None and el.kind == "multiple_choice" and isinstance(value, list):
            out[element_id] = sorted(value)
        else:
            out[element_id] = value
    return out
