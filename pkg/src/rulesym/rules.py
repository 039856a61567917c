"""Variables, literals, rules and renamings.

Variables are plain non-negative integers ordered numerically; ``0`` renders
as ``A``, ``1`` as ``B`` and so on, with ``V26``, ``V27``, ... past ``Z``.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, NamedTuple

Variable = int

PRED_NAME = re.compile(r"[a-z][a-zA-Z0-9_]*\Z")


class RuleError(ValueError):
    """A rule is structurally broken or cannot be repaired."""


def var_name(v: Variable) -> str:
    if v < 0:
        raise ValueError(f"negative variable index {v}")
    if v < 26:
        return chr(ord("A") + v)
    return f"V{v}"


class PredicateSym(NamedTuple):
    name: str
    arity: int

    def __str__(self):
        return f"{self.name}/{self.arity}"


def check_pred_name(name: str) -> None:
    if not PRED_NAME.match(name):
        raise RuleError(f"invalid predicate name {name!r}")


@dataclass(frozen=True, order=True)
class Literal:
    name: str
    args: tuple[Variable, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def pred(self) -> PredicateSym:
        return PredicateSym(self.name, len(self.args))

    @property
    def vars(self) -> frozenset[Variable]:
        return frozenset(self.args)

    def rename(self, mapping: Mapping[Variable, Variable]) -> Literal:
        return Literal(self.name, tuple(mapping.get(v, v) for v in self.args))

    def __str__(self):
        if not self.args:
            return self.name
        return f"{self.name}({','.join(var_name(v) for v in self.args)})"


def lit(name: str, *args: Variable) -> Literal:
    return Literal(name, tuple(args))


@dataclass(frozen=True)
class Rule:
    head: Literal
    body: frozenset[Literal]

    def __init__(self, head: Literal, body: Iterable[Literal]):
        object.__setattr__(self, "head", head)
        object.__setattr__(self, "body", frozenset(body))

    @property
    def sorted_body(self) -> tuple[Literal, ...]:
        return tuple(sorted(self.body))

    @property
    def head_vars(self) -> frozenset[Variable]:
        return self.head.vars

    @property
    def body_vars(self) -> frozenset[Variable]:
        return frozenset(v for l in self.body for v in l.args)

    @property
    def vars(self) -> frozenset[Variable]:
        return self.head_vars | self.body_vars

    @property
    def body_ge2(self) -> tuple[Literal, ...]:
        """Body literals of arity two or more, in canonical order."""
        return tuple(l for l in self.sorted_body if l.arity >= 2)

    @property
    def max_body_arity(self) -> int:
        return max((l.arity for l in self.body), default=0)

    def key(self) -> tuple:
        return (self.head, self.sorted_body)

    def __lt__(self, other: Rule) -> bool:
        return self.key() < other.key()

    def __str__(self):
        body = ", ".join(str(l) for l in self.sorted_body)
        return f"{self.head} :- {body}."


@dataclass(frozen=True)
class Hypothesis:
    rules: frozenset[Rule]

    def __init__(self, rules: Iterable[Rule]):
        object.__setattr__(self, "rules", frozenset(rules))

    def __iter__(self) -> Iterator[Rule]:
        return iter(sorted(self.rules))

    def __len__(self):
        return len(self.rules)


def body_only_vars(rule: Rule) -> frozenset[Variable]:
    return rule.body_vars - rule.head_vars


def occurrences(rule: Rule) -> Counter:
    """Argument-position occurrence counts over head and body."""
    counts = Counter(rule.head.args)
    for l in rule.body:
        counts.update(l.args)
    return counts


@dataclass(frozen=True)
class Violation:
    code: str
    detail: str

    def __str__(self):
        return f"{self.code}: {self.detail}"


def check_arities(rule: Rule, signature=None) -> None:
    """Raise RuleError when one predicate name is used with two arities,
    or when a literal disagrees with ``signature``."""
    seen: dict[str, int] = {}
    for l in (rule.head, *rule.sorted_body):
        check_pred_name(l.name)
        if seen.setdefault(l.name, l.arity) != l.arity:
            raise RuleError(
                f"arity mismatch: {l.name} used with arity {seen[l.name]} and {l.arity}"
            )
    if signature is not None:
        known = {p.name: p.arity for p in signature.preds}
        for l in (rule.head, *rule.sorted_body):
            if l.name not in known:
                raise RuleError(f"unknown predicate {l.name}")
            if known[l.name] != l.arity:
                raise RuleError(
                    f"arity mismatch: {l} but signature declares {l.name}/{known[l.name]}"
                )


def validate(rule: Rule, signature=None) -> list[Violation]:
    """Return every violated rule invariant; an empty list means valid.

    Structural problems (inconsistent arities) raise RuleError instead.
    """
    check_arities(rule, signature)
    out = []
    if not rule.body:
        out.append(Violation("empty-body", "rule has no body literals"))
    missing = sorted(rule.head_vars - rule.body_vars)
    if missing:
        names = ",".join(var_name(v) for v in missing)
        out.append(Violation("not-head-connected", f"head variables {names} absent from body"))
    singles = sorted(v for v, n in occurrences(rule).items() if n == 1)
    if singles:
        names = ",".join(var_name(v) for v in singles)
        out.append(Violation("singleton", f"variables {names} occur once"))
    h = len(rule.head_vars)
    if sorted(rule.head_vars) != list(range(h)):
        out.append(Violation("head-not-smallest", f"head variables are not A..{var_name(max(h - 1, 0))}"))
    vs = rule.vars
    gaps = sorted(set(range(max(vs) + 1)) - vs) if vs else []
    if gaps:
        names = ",".join(var_name(v) for v in gaps)
        out.append(Violation("variable-gap", f"variables {names} missing"))
    return out


def is_valid(rule: Rule, signature=None) -> bool:
    return not validate(rule, signature)


def apply_renaming(rule: Rule, mapping: Mapping[Variable, Variable]) -> Rule:
    """Simultaneous substitution; the body may shrink if literals collide."""
    images = [mapping.get(v, v) for v in sorted(rule.vars)]
    if len(set(images)) != len(images):
        raise RuleError("mapping is not injective on the rule's variables")
    return Rule(rule.head.rename(mapping), (l.rename(mapping) for l in rule.body))


def clean(mapping: Mapping[Variable, Variable]) -> dict[Variable, Variable]:
    """Drop identity entries."""
    return {k: v for k, v in sorted(mapping.items()) if k != v}


def compose(first: Mapping, second: Mapping) -> dict[Variable, Variable]:
    """The renaming ``x -> second(first(x))`` (postfix ``first`` then ``second``)."""
    keys = set(first) | set(second)
    return clean({x: second.get(first.get(x, x), first.get(x, x)) for x in keys})


def invert(mapping: Mapping[Variable, Variable]) -> dict[Variable, Variable]:
    inv = {v: k for k, v in mapping.items()}
    if len(inv) != len(mapping):
        raise RuleError("mapping is not injective")
    return clean(inv)


def format_renaming(mapping: Mapping[Variable, Variable]) -> str:
    items = ", ".join(f"{var_name(k)}->{var_name(v)}" for k, v in sorted(mapping.items()))
    return "{" + items + "}"


def normalize(rule: Rule) -> Rule:
    """Rename so head variables are ``A..`` and all variables are contiguous."""
    check_arities(rule)
    if not rule.body:
        raise RuleError("cannot normalize a rule with an empty body")
    if rule.head_vars - rule.body_vars:
        raise RuleError("rule is not head-connected")
    if any(n == 1 for n in occurrences(rule).values()):
        raise RuleError("rule has a singleton variable")
    mapping: dict[Variable, Variable] = {}
    order = list(rule.head.args) + [v for l in rule.sorted_body for v in l.args]
    for v in order:
        if v not in mapping:
            mapping[v] = len(mapping)
    return apply_renaming(rule, mapping)
