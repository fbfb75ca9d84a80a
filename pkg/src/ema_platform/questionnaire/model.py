"""Domain types for questionnaire documents and answer sheets.

Everything here is an immutable value object; parsing and validation live
in sibling modules.  Localized text is a plain ``{locale: string}`` dict.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date, datetime
from typing import Mapping, TYPE_CHECKING

from ..errors import Defect

if TYPE_CHECKING:  # avoid runtime cycle questionnaire -> auth -> questionnaire
    from ..auth.privacy import SensorPayload
    from ..scheduling import ScheduleSpec

ELEMENT_KINDS = frozenset(
    {"single_choice", "multiple_choice", "text", "date", "selection", "static_text"}
)

# Kinds answered with one value-code drawn from the element's options.
# "selection" renders as a dropdown but validates exactly like single_choice.
SINGLE_VALUE_CHOICE_KINDS = frozenset({"single_choice", "selection"})
CHOICE_KINDS = SINGLE_VALUE_CHOICE_KINDS | {"multiple_choice"}

DEFAULT_TEXT_MAX_LENGTH = 4000


@dataclass(frozen=True)
class Option:
    value: str
    label: Mapping[str, str]


@dataclass(frozen=True)
class Constraints:
    max_length: int | None = None
    min_date: date | None = None
    max_date: date | None = None
    min_selected: int | None = None
    max_selected: int | None = None


@dataclass(frozen=True)
class Element:
    id: str
    kind: str
    label: Mapping[str, str]
    required: bool = False
    options: tuple[Option, ...] = ()
    constraints: Constraints | None = None

    @property
    def option_values(self) -> frozenset[str]:
        return frozenset(o.value for o in self.options)

    @property
    def text_max_length(self) -> int:
        if self.constraints and self.constraints.max_length is not None:
            return self.constraints.max_length
        return DEFAULT_TEXT_MAX_LENGTH


@dataclass(frozen=True)
class Page:
    id: str
    elements: tuple[Element, ...]


@dataclass(frozen=True)
class QuestionnaireDoc:
    id: str
    version: int
    default_locale: str
    title: Mapping[str, str]
    locales: frozenset[str]
    pages: tuple[Page, ...]
    schedule: "ScheduleSpec | None" = None

    def elements(self) -> tuple[Element, ...]:
        return tuple(e for p in self.pages for e in p.elements)

    def element(self, element_id: str) -> Element | None:
        for page in self.pages:
            for el in page.elements:
                if el.id == element_id:
                    return el
        return None


@dataclass(frozen=True)
class AnswerSheet:
    """One submitted filled-out questionnaire, pinned to the exact
    questionnaire version it was filled against.

    ``answers`` holds raw submitted values (string, or list of strings for
    multiple_choice); validation interprets them against the element kind.
    """

    sheet_id: str
    account_id: str
    study_id: str
    questionnaire_id: str
    questionnaire_version: int
    client_submitted_at: datetime
    server_received_at: datetime
    answers: Mapping[str, object]
    sensor: "SensorPayload | None" = None
    consents: frozenset[str] = frozenset()


@dataclass(frozen=True)
class ValidationReport:
    defects: tuple[Defect, ...] = ()

    @property
    def verdict(self) -> str:
        return "accepted" if not self.defects else "rejected"

    @property
    def accepted(self) -> bool:
        return not self.defects

    def codes(self) -> list[str]:
        return [d.code for d in self.defects]
