"""Rule-based feedback: condition ASTs evaluated over validated answer sheets."""

from .expressions import (
    Answered,
    AnswerRef,
    BoolOp,
    Compare,
    Contains,
    CountSelected,
    EvalTypeError,
    Expr,
    Literal,
    MISSING,
    Not,
    Score,
    Sum,
    eval_expression,
)
from .model import FeedbackBlock, FeedbackRuleSet, Rule
from .parser import parse_ruleset, serialize_ruleset
from .lint import lint_ruleset
from .engine import evaluate

__all__ = [
    "Answered",
    "AnswerRef",
    "BoolOp",
    "Compare",
    "Contains",
    "CountSelected",
    "EvalTypeError",
    "Expr",
    "Literal",
    "MISSING",
    "Not",
    "Score",
    "Sum",
    "FeedbackBlock",
    "FeedbackRuleSet",
    "Rule",
    "eval_expression",
    "parse_ruleset",
    "serialize_ruleset",
    "lint_ruleset",
    "evaluate",
]
