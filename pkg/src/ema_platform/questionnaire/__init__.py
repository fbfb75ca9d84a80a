"""Questionnaire documents: parsing, localization, answer validation."""

from .model import (
    AnswerSheet,
    Constraints,
    Element,
    Option,
    Page,
    QuestionnaireDoc,
    ValidationReport,
    ELEMENT_KINDS,
    CHOICE_KINDS,
)
from .parser import parse_questionnaire, serialize_questionnaire
from .validation import validate_answer_sheet, canonical_answers
from .locale import resolve_locale, localize, localize_text

__all__ = [
    "AnswerSheet",
    "Constraints",
    "Element",
    "Option",
    "Page",
    "QuestionnaireDoc",
    "ValidationReport",
    "ELEMENT_KINDS",
    "CHOICE_KINDS",
    "parse_questionnaire",
    "serialize_questionnaire",
    "validate_answer_sheet",
    "canonical_answers",
    "resolve_locale",
    "localize",
    "localize_text",
]
