"""Condition expression AST and its evaluator.

The expression language is a deliberately small closed AST: every
construct is enumerable and individually testable.  Numerics are
``Decimal`` throughout; binary floats never enter a condition.

Missing-answer semantics: ``answered(e)`` is the explicit presence test
and returns False for an unanswered element.  Every *other* reference to
an unanswered element makes the nearest enclosing comparison (or
``contains``) evaluate to False instead of erroring: value-producing
nodes propagate a MISSING sentinel upward until a boolean-producing node
absorbs it.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date
from decimal import Decimal, InvalidOperation
from typing import Mapping, TYPE_CHECKING

from ..errors import PlatformError

if TYPE_CHECKING:
    from ..questionnaire.model import AnswerSheet


class EvalTypeError(PlatformError):
    """Raised only when lint was skipped and an operand has the wrong type;
    carries the offending sub-expression."""

    code = "type-error"
    http_status = 500

    def __init__(self, detail: str, expr: "Expr"):
        super().__init__(detail)
        self.expr = expr


class _Missing:
    __slots__ = ()

    def __repr__(self) -> str:
        return "MISSING"


MISSING = _Missing()


@dataclass(frozen=True)
class Expr:
    pass


@dataclass(frozen=True)
class Literal(Expr):
    value: Decimal | str | bool


@dataclass(frozen=True)
class AnswerRef(Expr):
    element_id: str


@dataclass(frozen=True)
class Answered(Expr):
    element_id: str


@dataclass(frozen=True)
class Contains(Expr):
    element_id: str
    value: str


@dataclass(frozen=True)
class Compare(Expr):
    op: str  # eq ne lt le gt ge
    left: Expr
    right: Expr


@dataclass(frozen=True)
class BoolOp(Expr):
    op: str  # and / or
    args: tuple[Expr, ...]


@dataclass(frozen=True)
class Not(Expr):
    arg: Expr


@dataclass(frozen=True)
class Sum(Expr):
    terms: tuple[Expr, ...]


@dataclass(frozen=True)
class CountSelected(Expr):
    element_id: str


@dataclass(frozen=True)
class Score(Expr):
    element_id: str
    mapping: Mapping[str, Decimal]


ORDERING_OPS = frozenset({"lt", "le", "gt", "ge"})
EQUALITY_OPS = frozenset({"eq", "ne"})


def eval_expression(expr: Expr, sheet: "AnswerSheet"):
    """Strict, side-effect-free evaluation of an expression over a
    validated sheet.  Returns bool, Decimal, str, frozenset, or MISSING.
    """
    return _eval(expr, sheet.answers)


def _eval(expr: Expr, answers: Mapping[str, object]):
    if isinstance(expr, Literal):
        return expr.value

    if isinstance(expr, AnswerRef):
        value = answers.get(expr.element_id, MISSING)
        if isinstance(value, list):
            return frozenset(value)
        return value

    if isinstance(expr, Answered):
        return expr.element_id in answers

    if isinstance(expr, Contains):
        value = answers.get(expr.element_id, MISSING)
        if value is MISSING:
            return False
        if isinstance(value, (list, frozenset, set)):
            return expr.value in value
        if isinstance(value, str):  # single-valued element: membership is equality
            return expr.value == value
        raise EvalTypeError(f"contains() over non-selection value {value!r}", expr)

    if isinstance(expr, Compare):
        left = _eval(expr.left, answers)
        right = _eval(expr.right, answers)
        if left is MISSING or right is MISSING:
            return False
        return _compare(expr, left, right)

    if isinstance(expr, BoolOp):
        # strict: every operand is evaluated (and type-checked) regardless
        values = [_require_bool(a, _eval(a, answers)) for a in expr.args]
        return all(values) if expr.op == "and" else any(values)

    if isinstance(expr, Not):
        return not _require_bool(expr.arg, _eval(expr.arg, answers))

    if isinstance(expr, Sum):
        total = Decimal(0)
        for term in expr.terms:
            v = _eval(term, answers)
            if v is MISSING:
                return MISSING
            if not isinstance(v, Decimal):
                raise EvalTypeError(f"sum() over non-numeric {v!r}", term)
            total += v
        return total

    if isinstance(expr, CountSelected):
        value = answers.get(expr.element_id, MISSING)
        if value is MISSING:
            return MISSING
        if isinstance(value, (list, frozenset, set)):
            return Decimal(len(set(value)))
        raise EvalTypeError(f"count_selected() over non-selection value {value!r}", expr)

    if isinstance(expr, Score):
        value = answers.get(expr.element_id, MISSING)
        if value is MISSING:
            return MISSING
        if isinstance(value, str):
            return expr.mapping.get(value, Decimal(0))
        if isinstance(value, (list, frozenset, set)):
            return sum((expr.mapping.get(v, Decimal(0)) for v in set(value)), Decimal(0))
        raise EvalTypeError(f"score() over unscorable value {value!r}", expr)

    raise EvalTypeError(f"unknown expression node {expr!r}", expr)


def _require_bool(expr: Expr, value) -> bool:
    if not isinstance(value, bool):
        raise EvalTypeError(f"boolean operator over non-boolean {value!r}", expr)
    return value


def _compare(expr: Compare, left, right) -> bool:
    if expr.op in EQUALITY_OPS:
        if isinstance(left, bool) != isinstance(right, bool):
            raise EvalTypeError("equality between boolean and non-boolean", expr)
        if isinstance(left, Decimal) != isinstance(right, Decimal):
            raise EvalTypeError("equality between number and non-number", expr)
        if isinstance(left, frozenset) != isinstance(right, frozenset):
            raise EvalTypeError("equality between selection set and scalar", expr)
        result = left == right
        return result if expr.op == "eq" else not result

    left_n = _as_orderable(expr, left)
    right_n = _as_orderable(expr, right)
    if isinstance(left_n, Decimal) != isinstance(right_n, Decimal):
        raise EvalTypeError("ordering between number and date", expr)
    if expr.op == "lt":
        return left_n < right_n
    if expr.op == "le":
        return left_n <= right_n
    if expr.op == "gt":
        return left_n > right_n
    if expr.op == "ge":
        return left_n >= right_n
    raise EvalTypeError(f"unknown comparison {expr.op!r}", expr)


def _as_orderable(expr: Compare, value) -> Decimal | date:
    """Ordering is defined on numbers and on calendar dates (carried as
    ISO strings)."""
    if isinstance(value, Decimal):
        return value
    if isinstance(value, str):
        try:
            return date.fromisoformat(value)
        except ValueError:
            raise EvalTypeError(f"cannot order non-date string {value!r}", expr) from None
    raise EvalTypeError(f"cannot order value {value!r}", expr)


def walk(expr: Expr):
    """Yield every node of the expression tree, preorder."""
    yield expr
    if isinstance(expr, Compare):
        yield from walk(expr.left)
        yield from walk(expr.right)
    elif isinstance(expr, BoolOp):
        for a in expr.args:
            yield from walk(a)
    elif isinstance(expr, Not):
        yield from walk(expr.arg)
    elif isinstance(expr, Sum):
        for t in expr.terms:
            yield from walk(t)


def referenced_elements(expr: Expr) -> set[str]:
    out = set()
    for node in walk(expr):
        if isinstance(node, (AnswerRef, Answered, Contains, CountSelected, Score)):
            out.add(node.element_id)
    return out


def to_decimal(value) -> Decimal:
    """Coerce a parsed JSON number to Decimal without a float detour."""
    if isinstance(value, Decimal):
        return value
    if isinstance(value, bool):
        raise InvalidOperation("boolean is not a number")
    if isinstance(value, int):
        return Decimal(value)
    if isinstance(value, float):
        return Decimal(str(value))
    raise InvalidOperation(f"not a number: {value!r}")
