"""Prolog-like text format for rules, hypotheses and predicate signatures."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Iterable

from .rules import Hypothesis, Literal, PredicateSym, Rule, RuleError, Variable, check_pred_name


class ParseError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0, source: str | None = None):
        self.msg, self.line, self.col, self.source = msg, line, col, source
        where = f"{source}:" if source else ""
        super().__init__(f"{where}{line}:{col}: {msg}")


TOKEN = re.compile(
    r"""
    (?P<ws>\s+|%[^\n]*)
  | (?P<name>[a-z][a-zA-Z0-9_]*)
  | (?P<var>[A-Z_][a-zA-Z0-9_]*)
  | (?P<neck>:-|<-|←)
  | (?P<punct>[(),.])
    """,
    re.VERBOSE,
)


def parse_var(token: str) -> Variable:
    if len(token) == 1 and token.isupper():
        return ord(token) - ord("A")
    m = re.fullmatch(r"V(\d+)", token)
    if m:
        return int(m.group(1))
    raise ValueError(f"unsupported variable name {token!r} (use A-Z or V<n>)")


def tokenize(text: str, source: str | None = None):
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = TOKEN.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col, source)
        kind = m.lastgroup
        value = m.group()
        if kind != "ws":
            yield kind, value, line, col
        nl = value.count("\n")
        if nl:
            line += nl
            line_start = pos + value.rindex("\n") + 1
        pos = m.end()
    yield "eof", "", line, pos - line_start + 1


class _Parser:
    def __init__(self, text: str, source: str | None):
        self.source = source
        self.tokens = list(tokenize(text, source))
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def error(self, msg, tok=None):
        _, _, line, col = tok or self.peek()
        return ParseError(msg, line, col, self.source)

    def take(self, kind, value=None):
        tok = self.peek()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value or kind
            got = tok[1] or "end of input"
            raise self.error(f"expected {want!r}, got {got!r}")
        self.i += 1
        return tok

    def literal(self) -> Literal:
        tok = self.peek()
        if tok[0] == "var":
            raise self.error(f"variable {tok[1]!r} in predicate position")
        if tok[0] != "name":
            raise self.error(f"expected a literal, got {tok[1] or 'end of input'!r}")
        self.i += 1
        args = []
        if self.peek()[:2] == ("punct", "("):
            self.i += 1
            if self.peek()[:2] != ("punct", ")"):
                while True:
                    vt = self.peek()
                    if vt[0] == "name":
                        raise self.error(f"constant {vt[1]!r} not allowed; arguments must be variables")
                    self.take("var")
                    try:
                        args.append(parse_var(vt[1]))
                    except ValueError as e:
                        raise self.error(str(e), vt) from None
                    if self.peek()[:2] == ("punct", ","):
                        self.i += 1
                        continue
                    break
            self.take("punct", ")")
        return Literal(tok[1], tuple(args))

    def rule(self) -> tuple[Rule, int]:
        line = self.peek()[2]
        head = self.literal()
        self.take("neck")
        body = [self.literal()]
        while self.peek()[:2] == ("punct", ","):
            self.i += 1
            body.append(self.literal())
        self.take("punct", ".")
        return Rule(head, body), line


def parse_rules(text: str, source: str | None = None) -> list[tuple[Rule, int]]:
    """Parse every rule in ``text``; returns ``(rule, line)`` pairs."""
    p = _Parser(text, source)
    out = []
    while p.peek()[0] != "eof":
        out.append(p.rule())
    return out


def parse_rule(text: str) -> Rule:
    rules = parse_rules(text)
    if len(rules) != 1:
        raise ParseError(f"expected exactly one rule, found {len(rules)}", 1, 1)
    return rules[0][0]


def parse_hypothesis(text: str, source: str | None = None) -> Hypothesis:
    return Hypothesis(r for r, _ in parse_rules(text, source))


def render_rule(rule: Rule) -> str:
    return str(rule)


def render_rules(rules: Iterable[Rule]) -> str:
    return "".join(f"{r}\n" for r in rules)


@dataclass(frozen=True)
class Signature:
    head_pred: PredicateSym
    body_preds: frozenset[PredicateSym]

    def __post_init__(self):
        object.__setattr__(self, "body_preds", frozenset(self.body_preds))
        names = [self.head_pred.name] + [p.name for p in self.body_preds]
        if len(set(names)) != len(names):
            raise ValueError("predicate names must be distinct")
        if not self.body_preds:
            raise ValueError("signature needs at least one body predicate")
        for p in self.preds:
            check_pred_name(p.name)
            if p.arity < 0:
                raise ValueError(f"negative arity for {p.name}")

    @property
    def preds(self) -> tuple[PredicateSym, ...]:
        return (self.head_pred, *sorted(self.body_preds))

    @property
    def max_body_arity(self) -> int:
        return max(p.arity for p in self.body_preds)

    def default_k(self) -> int:
        return max(1, self.max_body_arity)

    def render(self) -> str:
        lines = [f"head {self.head_pred}"]
        lines += [f"body {p}" for p in sorted(self.body_preds)]
        return "\n".join(lines) + "\n"


def _pred_spec(text: str, line: int) -> PredicateSym:
    name, sep, arity = text.strip().partition("/")
    if not sep:
        raise ParseError(f"expected name/arity, got {text.strip()!r}", line, 1)
    if not arity.strip().isdigit():
        raise ParseError(f"non-numeric arity {arity.strip()!r}", line, 1)
    try:
        check_pred_name(name.strip())
    except RuleError as e:
        raise ParseError(str(e), line, 1) from None
    return PredicateSym(name.strip(), int(arity))


def _build_signature(head, body) -> Signature:
    if head is None:
        raise ParseError("missing head predicate", 1, 1)
    if not body:
        raise ParseError("no body predicates", 1, 1)
    try:
        return Signature(head, frozenset(body))
    except ValueError as e:
        raise ParseError(str(e), 1, 1) from None


def parse_signature(text: str) -> Signature:
    """Parse ``head name/arity`` + ``body name/arity`` lines, or the JSON form
    ``{"head": {"name":..,"arity":..}, "body": [{"name":..,"arity":..}, ...]}``."""
    if text.lstrip().startswith("{"):
        return _parse_signature_json(text)
    head = None
    body: list[PredicateSym] = []
    seen = set()
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        kind, _, spec = line.partition(" ")
        if kind not in ("head", "body"):
            raise ParseError(f"expected 'head' or 'body', got {kind!r}", n, 1)
        pred = _pred_spec(spec, n)
        if pred.name in seen:
            raise ParseError(f"duplicate predicate {pred.name}", n, 1)
        seen.add(pred.name)
        if kind == "head":
            if head is not None:
                raise ParseError("more than one head predicate", n, 1)
            head = pred
        else:
            body.append(pred)
    return _build_signature(head, body)


def _parse_signature_json(text: str) -> Signature:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from None

    def pred(item):
        if not isinstance(item, dict) or "name" not in item or "arity" not in item:
            raise ParseError("predicate entries need 'name' and 'arity'", 1, 1)
        if not isinstance(item["arity"], int) or isinstance(item["arity"], bool):
            raise ParseError(f"non-numeric arity {item['arity']!r}", 1, 1)
        return _pred_spec(f"{item['name']}/{item['arity']}", 1)

    head = pred(doc["head"]) if "head" in doc else None
    body = [pred(x) for x in doc.get("body", [])]
    names = [p.name for p in body] + ([head.name] if head else [])
    if len(set(names)) != len(names):
        raise ParseError("duplicate predicate", 1, 1)
    return _build_signature(head, body)


def signature_to_json(sig: Signature) -> str:
    doc = {
        "head": {"name": sig.head_pred.name, "arity": sig.head_pred.arity},
        "body": [{"name": p.name, "arity": p.arity} for p in sorted(sig.body_preds)],
    }
    return json.dumps(doc, indent=2)
