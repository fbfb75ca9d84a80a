"""Locale resolution and document localization.

The fallback chain is deterministic and total: exact match, then
language-prefix match, then the document default.  No region negotiation
beyond the prefix.
"""

from __future__ import annotations

from ..errors import Defect, ValidationError
from .model import QuestionnaireDoc
from .parser import _doc_dict


def resolve_locale(doc: QuestionnaireDoc, requested: str) -> str:
    """Pick the locale the document will be served in.  Total function:
    always returns a member of doc.locales."""
    return resolve_from(doc.locales, doc.default_locale, requested)


def resolve_from(available: frozenset[str] | set[str], default: str, requested: str) -> str:
    req = requested.strip().casefold() if requested else ""
    if not req:
        return default
    by_fold = {}
    for loc in sorted(available):  # sorted: deterministic prefix tie-break
        by_fold.setdefault(loc.casefold(), loc)
    if req in by_fold:
        return by_fold[req]
    language = req.split("-")[0]
    if language in by_fold:
        return by_fold[language]
    for fold, original in sorted(by_fold.items()):
        if fold.split("-")[0] == language:
            return original
    return default


def localize_text(text, locale: str) -> str | None:
    """Look up a localized string with case-insensitive locale keys."""
    if locale in text:
        return text[locale]
    fold = locale.casefold()
    for k, v in text.items():
        if k.casefold() == fold:
            return v
    return None


def localize(doc: QuestionnaireDoc, locale: str) -> dict:
    """Collapse every localized text to its string in ``locale``.

    Returns the rendered document as a plain dict (the wire shape, with
    a top-level ``locale`` key).  Raises ValidationError listing every
    missing-translation defect; by invariant none are possible for the
    default locale.
    """
    if locale not in doc.locales:
        raise ValueError(f"locale {locale!r} not offered by document {doc.id!r}")
    missing: list[Defect] = []

    def collapse(text, subject: str) -> str:
        s = localize_text(text, locale)
        if s is None:
            missing.append(
                Defect("missing-translation", f"{subject!r} has no {locale!r} text", subject=subject)
            )
            return ""
        return s

    rendered = _doc_dict(doc)
    del rendered["locales"]
    rendered["locale"] = locale
    rendered["title"] = collapse(doc.title, "title")
    for page, rpage in zip(doc.pages, rendered["pages"]):
        for el, rel in zip(page.elements, rpage["elements"]):
            rel["label"] = collapse(el.label, el.id)
            if "options" in rel:
                for opt, ropt in zip(el.options, rel["options"]):
                    ropt["label"] = collapse(opt.label, f"{el.id}:{opt.value}")
    if missing:
        raise ValidationError(missing)
    return rendered
