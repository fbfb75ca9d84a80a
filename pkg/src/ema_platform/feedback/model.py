"""Value types for feedback rule sets."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .expressions import Expr

BLOCK_KINDS = frozenset({"info", "warning", "recommendation"})


@dataclass(frozen=True)
class FeedbackBlock:
    kind: str
    body: Mapping[str, str]
    order: int


@dataclass(frozen=True)
class Rule:
    rule_id: str
    condition: Expr
    block: FeedbackBlock
    terminal: bool = False


@dataclass(frozen=True)
class FeedbackRuleSet:
    """An ordered rule list bound to exactly one questionnaire version."""

    questionnaire_id: str
    questionnaire_version: int
    rules: tuple[Rule, ...]
