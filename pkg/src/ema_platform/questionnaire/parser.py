"""Parse and canonically serialize questionnaire documents.

Document format (UTF-8 JSON)::

    {
      "id": "daily-checkin",
      "version": 1,
      "default_locale": "en",
      "locales": ["de", "en"],              // optional, else derived
      "title": {"en": "...", "de": "..."},
      "pages": [
        {"id": "p1", "elements": [
          {"id": "fever", "kind": "single_choice", "required": true,
           "label": {"en": "Fever?"},
           "options": [{"value": "yes", "label": {"en": "Yes"}},
                       {"value": "no",  "label": {"en": "No"}}]},
          ...
        ]}
      ],
      "schedule": {...}                      // optional, see scheduling
    }

Parsing reports the *complete* defect list, not just the first problem.
Defect codes: malformed-syntax, invalid-version, duplicate-element-id,
missing-default-locale, empty-page, no-pages, choice-without-options,
duplicate-option-value, invalid-kind, static-text-required,
invalid-constraints, invalid-locales, invalid-schedule.

Serialization is canonical: fixed key order, two-space indent, sorted
locale keys, trailing newline.  The golden corpus is stored in this form,
so parse -> serialize reproduces those files byte for byte.
"""

from __future__ import annotations

import json
from datetime import date

from ..errors import Defect, ValidationError
from ..scheduling import ScheduleSpec, parse_schedule, serialize_schedule
from ..timeutil import parse_date
from .model import (
    CHOICE_KINDS,
    ELEMENT_KINDS,
    Constraints,
    Element,
    Option,
    Page,
    QuestionnaireDoc,
)


def parse_questionnaire(raw: bytes | str | dict) -> QuestionnaireDoc:
    """Parse a questionnaire document; raises ValidationError carrying the
    complete list of structural defects."""
    if isinstance(raw, (bytes, str)):
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ValidationError([Defect("malformed-syntax", f"invalid JSON: {exc}")]) from exc
    else:
        data = raw
    if not isinstance(data, dict):
        raise ValidationError([Defect("malformed-syntax", "top level must be an object")])

    defects: list[Defect] = []

    doc_id = data.get("id")
    if not isinstance(doc_id, str) or not doc_id:
        defects.append(Defect("malformed-syntax", "'id' must be a non-empty string"))
        doc_id = ""

    version = data.get("version")
    if not isinstance(version, int) or isinstance(version, bool) or version < 1:
        defects.append(Defect("invalid-version", "'version' must be a positive integer"))
        version = 1

    default_locale = data.get("default_locale")
    if not isinstance(default_locale, str) or not default_locale:
        defects.append(Defect("malformed-syntax", "'default_locale' must be a non-empty string"))
        default_locale = ""

    title = _localized_text(data.get("title"), "title", default_locale, defects)

    pages: list[Page] = []
    seen_element_ids: set[str] = set()
    raw_pages = data.get("pages")
    if not isinstance(raw_pages, list) or not raw_pages:
        defects.append(Defect("no-pages", "'pages' must be a non-empty list"))
    else:
        for p_idx, raw_page in enumerate(raw_pages):
            pages.append(
                _parse_page(raw_page, p_idx, default_locale, seen_element_ids, defects)
            )

    locales = _collect_locales(data, title, pages, default_locale, defects)

    schedule: ScheduleSpec | None = None
    if "schedule" in data:
        if not isinstance(data["schedule"], dict):
            defects.append(Defect("invalid-schedule", "'schedule' must be an object"))
        else:
            try:
                schedule = parse_schedule(data["schedule"], doc_id or None)
            except ValidationError as exc:
                defects.extend(exc.defects)

    if defects:
        raise ValidationError(defects)
    return QuestionnaireDoc(
        id=doc_id,
        version=version,
        default_locale=default_locale,
        title=title,
        locales=locales,
        pages=tuple(pages),
        schedule=schedule,
    )


def _parse_page(
    raw_page: object,
    index: int,
    default_locale: str,
    seen_ids: set[str],
    defects: list[Defect],
) -> Page:
    if not isinstance(raw_page, dict):
        defects.append(Defect("malformed-syntax", f"page #{index} must be an object"))
        return Page(id=f"#{index}", elements=())
    page_id = raw_page.get("id")
    if not isinstance(page_id, str) or not page_id:
        defects.append(Defect("malformed-syntax", f"page #{index} needs a string 'id'"))
        page_id = f"#{index}"
    raw_elements = raw_page.get("elements")
    elements: list[Element] = []
    if not isinstance(raw_elements, list) or not raw_elements:
        defects.append(Defect("empty-page", f"page {page_id!r} has no elements", subject=page_id))
    else:
        for e_idx, raw_el in enumerate(raw_elements):
            el = _parse_element(raw_el, page_id, e_idx, default_locale, defects)
            if el is None:
                continue
            if el.id in seen_ids:
                defects.append(
                    Defect("duplicate-element-id", f"element id {el.id!r} appears twice", subject=el.id)
                )
            seen_ids.add(el.id)
            elements.append(el)
    return Page(id=page_id, elements=tuple(elements))


def _parse_element(
    raw: object,
    page_id: str,
    index: int,
    default_locale: str,
    defects: list[Defect],
) -> Element | None:
    where = f"page {page_id!r} element #{index}"
    if not isinstance(raw, dict):
        defects.append(Defect("malformed-syntax", f"{where} must be an object"))
        return None
    el_id = raw.get("id")
    if not isinstance(el_id, str) or not el_id:
        defects.append(Defect("malformed-syntax", f"{where} needs a string 'id'"))
        return None

    kind = raw.get("kind")
    if kind not in ELEMENT_KINDS:
        defects.append(Defect("invalid-kind", f"unknown element kind {kind!r}", subject=el_id))
        kind = "text"

    required = raw.get("required", False)
    if not isinstance(required, bool):
        defects.append(Defect("malformed-syntax", f"{where}: 'required' must be boolean", subject=el_id))
        required = False
    if kind == "static_text" and required:
        defects.append(
            Defect("static-text-required", "static_text elements can never be required", subject=el_id)
        )
        required = False

    label = _localized_text(raw.get("label"), el_id, default_locale, defects)

    options: list[Option] = []
    if kind in CHOICE_KINDS:
        raw_options = raw.get("options")
        if not isinstance(raw_options, list) or not raw_options:
            defects.append(
                Defect("choice-without-options", f"{kind} element needs >= 1 option", subject=el_id)
            )
        else:
            seen_values: set[str] = set()
            for o_idx, raw_opt in enumerate(raw_options):
                if not isinstance(raw_opt, dict) or not isinstance(raw_opt.get("value"), str):
                    defects.append(
                        Defect("malformed-syntax", f"{where} option #{o_idx} needs a string 'value'", subject=el_id)
                    )
                    continue
                value = raw_opt["value"]
                if value in seen_values:
                    defects.append(
                        Defect("duplicate-option-value", f"option value {value!r} repeats", subject=el_id)
                    )
                seen_values.add(value)
                opt_label = _localized_text(
                    raw_opt.get("label"), f"{el_id}:{value}", default_locale, defects
                )
                options.append(Option(value=value, label=opt_label))
    elif "options" in raw:
        defects.append(
            Defect("malformed-syntax", f"{kind} element cannot carry options", subject=el_id)
        )

    constraints = _parse_constraints(raw.get("constraints"), kind, el_id, defects)

    return Element(
        id=el_id,
        kind=kind,
        label=label,
        required=required,
        options=tuple(options),
        constraints=constraints,
    )


_CONSTRAINT_KEYS = {
    "text": {"max_length"},
    "date": {"min_date", "max_date"},
    "multiple_choice": {"min_selected", "max_selected"},
}


def _parse_constraints(
    raw: object, kind: str, el_id: str, defects: list[Defect]
) -> Constraints | None:
    if raw is None:
        return None
    if not isinstance(raw, dict):
        defects.append(Defect("invalid-constraints", "constraints must be an object", subject=el_id))
        return None
    allowed = _CONSTRAINT_KEYS.get(kind, set())
    unknown = set(raw) - allowed
    if unknown:
        defects.append(
            Defect(
                "invalid-constraints",
                f"constraints {sorted(unknown)} not applicable to {kind}",
                subject=el_id,
            )
        )

    def _int_field(key: str, minimum: int) -> int | None:
        v = raw.get(key)
        if v is None:
            return None
        if not isinstance(v, int) or isinstance(v, bool) or v < minimum:
            defects.append(
                Defect("invalid-constraints", f"{key} must be an integer >= {minimum}", subject=el_id)
            )
            return None
        return v

    def _date_field(key: str) -> date | None:
        v = raw.get(key)
        if v is None:
            return None
        try:
            return parse_date(v)
        except (ValueError, TypeError):
            defects.append(
                Defect("invalid-constraints", f"{key} must be a calendar date", subject=el_id)
            )
            return None

    c = Constraints(
        max_length=_int_field("max_length", 1),
        min_date=_date_field("min_date"),
        max_date=_date_field("max_date"),
        min_selected=_int_field("min_selected", 0),
        max_selected=_int_field("max_selected", 0),
    )
    if c.min_date and c.max_date and c.min_date > c.max_date:
        defects.append(Defect("invalid-constraints", "min_date after max_date", subject=el_id))
    if (
        c.min_selected is not None
        and c.max_selected is not None
        and c.min_selected > c.max_selected
    ):
        defects.append(Defect("invalid-constraints", "min_selected above max_selected", subject=el_id))
    if all(v is None for v in (c.max_length, c.min_date, c.max_date, c.min_selected, c.max_selected)):
        return None
    return c


def _localized_text(
    raw: object, subject: str, default_locale: str, defects: list[Defect]
) -> dict[str, str]:
    if not isinstance(raw, dict) or not raw or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in raw.items()
    ):
        defects.append(
            Defect("malformed-syntax", f"{subject!r}: localized text must map locale -> string", subject=subject)
        )
        return {default_locale: ""} if default_locale else {}
    if default_locale and default_locale not in raw:
        defects.append(
            Defect(
                "missing-default-locale",
                f"{subject!r} lacks the default locale {default_locale!r}",
                subject=subject,
            )
        )
    return dict(raw)


def _collect_locales(
    data: dict,
    title: dict[str, str],
    pages: list[Page],
    default_locale: str,
    defects: list[Defect],
) -> frozenset[str]:
    derived: set[str] = set(title)
    for page in pages:
        for el in page.elements:
            derived.update(el.label)
            for opt in el.options:
                derived.update(opt.label)
    if default_locale:
        derived.add(default_locale)

    if "locales" in data:
        raw = data["locales"]
        if (
            not isinstance(raw, list)
            or not raw
            or not all(isinstance(x, str) and x for x in raw)
        ):
            defects.append(Defect("invalid-locales", "'locales' must be a list of locale codes"))
            return frozenset(derived)
        explicit = frozenset(raw)
        if default_locale and default_locale not in explicit:
            defects.append(
                Defect("invalid-locales", f"'locales' must include the default {default_locale!r}")
            )
        return explicit
    return frozenset(derived)


def serialize_questionnaire(doc: QuestionnaireDoc) -> str:
    """Canonical JSON text for a document (deterministic byte-for-byte)."""
    return json.dumps(_doc_dict(doc), indent=2, ensure_ascii=False) + "\n"


def _doc_dict(doc: QuestionnaireDoc) -> dict:
    out: dict = {
        "id": doc.id,
        "version": doc.version,
        "default_locale": doc.default_locale,
        "locales": sorted(doc.locales),
        "title": _text_dict(doc.title),
        "pages": [
            {"id": p.id, "elements": [_element_dict(e) for e in p.elements]}
            for p in doc.pages
        ],
    }
    if doc.schedule is not None:
        out["schedule"] = serialize_schedule(doc.schedule)
    return out


def _element_dict(el: Element) -> dict:
    out: dict = {"id": el.id, "kind": el.kind, "required": el.required, "label": _text_dict(el.label)}
    if el.kind in CHOICE_KINDS:
        out["options"] = [{"value": o.value, "label": _text_dict(o.label)} for o in el.options]
    if el.constraints is not None:
        c = el.constraints
        cd = {}
        for key in ("max_length", "min_date", "max_date", "min_selected", "max_selected"):
            v = getattr(c, key)
            if v is not None:
                cd[key] = v.isoformat() if isinstance(v, date) else v
        if cd:
            out["constraints"] = cd
    return out


def _text_dict(text) -> dict:
    return {k: text[k] for k in sorted(text)}
