"""Parse and canonically serialize feedback rule sets.

Rule-set format (UTF-8 JSON, condition trees in prefix notation)::

    {
      "questionnaire_id": "daily-checkin",
      "questionnaire_version": 1,
      "rules": [
        {"id": "r1", "terminal": true,
         "condition": {"op": "and", "args": [
             {"op": "eq", "args": [{"answer": "fever"}, "yes"]},
             {"op": "eq", "args": [{"answer": "contact"}, "yes"]}]},
         "block": {"kind": "warning", "order": 10,
                   "body": {"en": "Please seek testing."}}}
      ]
    }

Leaf forms: ``{"answer": "<element-id>"}`` references an answer; bare JSON
scalars are literals (numbers become Decimal, never binary floats).
Operators: and, or, not, eq, ne, lt, le, gt, ge, contains, answered,
count_selected, score, sum.

Parse errors are collected completely with codes malformed-syntax,
duplicate-rule-id, unknown-operator, arity-error, invalid-block.
"""

from __future__ import annotations

import json
from decimal import Decimal, InvalidOperation

from ..errors import Defect, ValidationError
from .expressions import (
    Answered,
    AnswerRef,
    BoolOp,
    Compare,
    Contains,
    CountSelected,
    Expr,
    Literal,
    Not,
    Score,
    Sum,
    to_decimal,
)
from .model import BLOCK_KINDS, FeedbackBlock, FeedbackRuleSet, Rule

_COMPARISONS = frozenset({"eq", "ne", "lt", "le", "gt", "ge"})
_KNOWN_OPS = _COMPARISONS | {
    "and",
    "or",
    "not",
    "contains",
    "answered",
    "count_selected",
    "score",
    "sum",
}


def parse_ruleset(raw: bytes | str | dict) -> FeedbackRuleSet:
    """Parse a rule-set document; raises ValidationError with the complete
    defect list."""
    if isinstance(raw, (bytes, str)):
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        try:
            data = json.loads(raw, parse_float=Decimal)
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise ValidationError([Defect("malformed-syntax", f"invalid JSON: {exc}")]) from exc
    else:
        data = raw
    if not isinstance(data, dict):
        raise ValidationError([Defect("malformed-syntax", "top level must be an object")])

    defects: list[Defect] = []

    qid = data.get("questionnaire_id")
    if not isinstance(qid, str) or not qid:
        defects.append(Defect("malformed-syntax", "'questionnaire_id' must be a non-empty string"))
        qid = ""
    qver = data.get("questionnaire_version")
    if not isinstance(qver, int) or isinstance(qver, bool) or qver < 1:
        defects.append(Defect("malformed-syntax", "'questionnaire_version' must be a positive integer"))
        qver = 1

    rules: list[Rule] = []
    raw_rules = data.get("rules")
    if not isinstance(raw_rules, list):
        defects.append(Defect("malformed-syntax", "'rules' must be a list"))
    else:
        seen: set[str] = set()
        for idx, raw_rule in enumerate(raw_rules):
            rule = _parse_rule(raw_rule, idx, defects)
            if rule is None:
                continue
            if rule.rule_id in seen:
                defects.append(
                    Defect("duplicate-rule-id", f"rule id {rule.rule_id!r} appears twice", subject=rule.rule_id)
                )
            seen.add(rule.rule_id)
            rules.append(rule)

    if defects:
        raise ValidationError(defects)
    return FeedbackRuleSet(questionnaire_id=qid, questionnaire_version=qver, rules=tuple(rules))


def _parse_rule(raw: object, index: int, defects: list[Defect]) -> Rule | None:
    where = f"rule #{index}"
    if not isinstance(raw, dict):
        defects.append(Defect("malformed-syntax", f"{where} must be an object"))
        return None
    rule_id = raw.get("id")
    if not isinstance(rule_id, str) or not rule_id:
        defects.append(Defect("malformed-syntax", f"{where} needs a string 'id'"))
        return None
    terminal = raw.get("terminal", False)
    if not isinstance(terminal, bool):
        defects.append(Defect("malformed-syntax", f"{where}: 'terminal' must be boolean", subject=rule_id))
        terminal = False

    if "condition" not in raw:
        defects.append(Defect("malformed-syntax", f"{where} lacks a 'condition'", subject=rule_id))
        return None
    condition = _parse_expr(raw["condition"], rule_id, defects)

    block = _parse_block(raw.get("block"), rule_id, defects)
    if condition is None or block is None:
        return None
    return Rule(rule_id=rule_id, condition=condition, block=block, terminal=terminal)


def _parse_block(raw: object, rule_id: str, defects: list[Defect]) -> FeedbackBlock | None:
    if not isinstance(raw, dict):
        defects.append(Defect("invalid-block", f"rule {rule_id!r} needs a 'block' object", subject=rule_id))
        return None
    kind = raw.get("kind")
    if kind not in BLOCK_KINDS:
        defects.append(Defect("invalid-block", f"unknown block kind {kind!r}", subject=rule_id))
        return None
    order = raw.get("order", 0)
    if not isinstance(order, int) or isinstance(order, bool):
        defects.append(Defect("invalid-block", "block 'order' must be an integer", subject=rule_id))
        return None
    body = raw.get("body")
    if (
        not isinstance(body, dict)
        or not body
        or not all(isinstance(k, str) and isinstance(v, str) for k, v in body.items())
    ):
        defects.append(
            Defect("invalid-block", "block 'body' must map locale -> string", subject=rule_id)
        )
        return None
    return FeedbackBlock(kind=kind, body=dict(body), order=order)


def _parse_expr(raw: object, rule_id: str, defects: list[Defect]) -> Expr | None:
    if isinstance(raw, bool):
        return Literal(raw)
    if isinstance(raw, (int, float, Decimal)):
        try:
            return Literal(to_decimal(raw))
        except InvalidOperation:
            defects.append(Defect("malformed-syntax", f"bad number {raw!r}", subject=rule_id))
            return None
    if isinstance(raw, str):
        return Literal(raw)
    if not isinstance(raw, dict):
        defects.append(Defect("malformed-syntax", f"bad expression node {raw!r}", subject=rule_id))
        return None

    if set(raw) == {"answer"}:
        if not isinstance(raw["answer"], str):
            defects.append(Defect("malformed-syntax", "answer reference needs an element id", subject=rule_id))
            return None
        return AnswerRef(raw["answer"])

    op = raw.get("op")
    if op not in _KNOWN_OPS:
        defects.append(Defect("unknown-operator", f"unknown operator {op!r}", subject=rule_id))
        return None
    args = raw.get("args")
    if not isinstance(args, list):
        defects.append(Defect("arity-error", f"{op}: 'args' must be a list", subject=rule_id))
        return None

    def arity(expected: str, ok: bool) -> bool:
        if not ok:
            defects.append(
                Defect("arity-error", f"{op} takes {expected}, got {len(args)} arg(s)", subject=rule_id)
            )
        return ok

    if op in ("and", "or"):
        if not arity(">= 2 operands", len(args) >= 2):
            return None
        sub = [_parse_expr(a, rule_id, defects) for a in args]
        if any(s is None for s in sub):
            return None
        return BoolOp(op, tuple(sub))

    if op == "not":
        if not arity("exactly 1 operand", len(args) == 1):
            return None
        sub = _parse_expr(args[0], rule_id, defects)
        return Not(sub) if sub is not None else None

    if op in _COMPARISONS:
        if not arity("exactly 2 operands", len(args) == 2):
            return None
        left = _parse_expr(args[0], rule_id, defects)
        right = _parse_expr(args[1], rule_id, defects)
        if left is None or right is None:
            return None
        return Compare(op, left, right)

    if op in ("answered", "count_selected"):
        if not arity("exactly 1 element id", len(args) == 1 and isinstance(args[0], str)):
            return None
        return Answered(args[0]) if op == "answered" else CountSelected(args[0])

    if op == "contains":
        if not arity(
            "an element id and a value-code",
            len(args) == 2 and isinstance(args[0], str) and isinstance(args[1], str),
        ):
            return None
        return Contains(args[0], args[1])

    if op == "score":
        ok = len(args) == 2 and isinstance(args[0], str) and isinstance(args[1], dict)
        if not arity("an element id and a {value-code: number} map", ok):
            return None
        mapping = {}
        for k, v in args[1].items():
            try:
                mapping[k] = to_decimal(v)
            except InvalidOperation:
                defects.append(
                    Defect("malformed-syntax", f"score map value {v!r} is not a number", subject=rule_id)
                )
                return None
        return Score(args[0], mapping)

    if op == "sum":
        if not arity(">= 1 operand", len(args) >= 1):
            return None
        terms = [_parse_expr(a, rule_id, defects) for a in args]
        if any(t is None for t in terms):
            return None
        return Sum(tuple(terms))

    raise AssertionError(op)


def serialize_ruleset(ruleset: FeedbackRuleSet) -> str:
    """Canonical JSON text (deterministic; Decimals re-emitted as plain
    JSON numbers)."""
    doc = {
        "questionnaire_id": ruleset.questionnaire_id,
        "questionnaire_version": ruleset.questionnaire_version,
        "rules": [
            {
                "id": r.rule_id,
                "terminal": r.terminal,
                "condition": expr_dict(r.condition),
                "block": {
                    "kind": r.block.kind,
                    "order": r.block.order,
                    "body": {k: r.block.body[k] for k in sorted(r.block.body)},
                },
            }
            for r in ruleset.rules
        ],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False, default=_decimal_plain) + "\n"


def expr_dict(expr: Expr):
    """Expression back to its wire form."""
    if isinstance(expr, Literal):
        return expr.value
    if isinstance(expr, AnswerRef):
        return {"answer": expr.element_id}
    if isinstance(expr, Answered):
        return {"op": "answered", "args": [expr.element_id]}
    if isinstance(expr, CountSelected):
        return {"op": "count_selected", "args": [expr.element_id]}
    if isinstance(expr, Contains):
        return {"op": "contains", "args": [expr.element_id, expr.value]}
    if isinstance(expr, Score):
        return {"op": "score", "args": [expr.element_id, dict(expr.mapping)]}
    if isinstance(expr, Sum):
        return {"op": "sum", "args": [expr_dict(t) for t in expr.terms]}
    if isinstance(expr, Not):
        return {"op": "not", "args": [expr_dict(expr.arg)]}
    if isinstance(expr, BoolOp):
        return {"op": expr.op, "args": [expr_dict(a) for a in expr.args]}
    if isinstance(expr, Compare):
        return {"op": expr.op, "args": [expr_dict(expr.left), expr_dict(expr.right)]}
    raise AssertionError(expr)


def _decimal_plain(value):
    if isinstance(value, Decimal):
        if value == value.to_integral_value():
            return int(value)
        return float(value)
    raise TypeError(f"not JSON-serializable: {value!r}")
