"""Literal ordering and variable safety.

A body literal of arity two or more whose sorted, padded argument tuple jumps
over a variable must be justified by a lexicographically smaller literal that
contains that variable.  Rules where some body-only variable lacks such a
justification are the ones symmetry breaking removes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .rules import Literal, Rule, Variable, body_only_vars

PAD = 0  # the minimal variable


class SafetyError(ValueError):
    pass


@dataclass(frozen=True)
class SafetyContext:
    k: int = 2

    def __post_init__(self):
        if self.k < 1:
            raise SafetyError(f"padding width must be positive, got {self.k}")

    @classmethod
    def for_rule(cls, rule: Rule) -> SafetyContext:
        return cls(max(1, rule.max_body_arity))

    def check(self, rule: Rule) -> None:
        if rule.max_body_arity > self.k:
            raise SafetyError(
                f"k={self.k} is below the rule's maximum body arity {rule.max_body_arity}"
            )


def ordered_vars(l: Literal) -> tuple[Variable, ...]:
    return tuple(sorted(l.args))


def pre_pad(l: Literal, ctx: SafetyContext) -> tuple[Variable, ...]:
    ordered = ordered_vars(l)
    return (PAD,) * max(0, ctx.k - len(ordered)) + ordered


def lex_less(l1: Literal, l2: Literal, ctx: SafetyContext) -> bool:
    return pre_pad(l1, ctx) < pre_pad(l2, ctx)


def skipped(l: Literal, ctx: SafetyContext) -> frozenset[Variable]:
    padded = pre_pad(l, ctx)
    if not padded:
        return frozenset()
    return frozenset(range(padded[0] + 1, padded[-1])) - l.vars


def is_witnessed(rule: Rule, v: Variable, l1: Literal, ctx: SafetyContext) -> bool:
    if l1 not in rule.body or l1.arity < 2:
        raise SafetyError(f"{l1} is not a body literal of arity >= 2")
    if v not in skipped(l1, ctx):
        raise SafetyError(f"variable {v} is not skipped by {l1}")
    return any(v in l2.vars and lex_less(l2, l1, ctx) for l2 in rule.body_ge2)


def unsafe_report(rule: Rule, ctx: SafetyContext | None = None) -> dict[Variable, list[Literal]]:
    """Map each unsafe variable to the literals that skip it without a witness."""
    ctx = ctx or SafetyContext.for_rule(rule)
    ctx.check(rule)
    candidates = body_only_vars(rule)
    out: dict[Variable, list[Literal]] = {}
    for l in rule.body_ge2:
        for v in sorted(skipped(l, ctx) & candidates):
            if not is_witnessed(rule, v, l, ctx):
                out.setdefault(v, []).append(l)
    return dict(sorted(out.items()))


def unsafe_vars(rule: Rule, ctx: SafetyContext | None = None) -> frozenset[Variable]:
    return frozenset(unsafe_report(rule, ctx))


def is_safe(rule: Rule, ctx: SafetyContext | None = None) -> bool:
    # Short-circuits instead of building the full report.
    ctx = ctx or SafetyContext.for_rule(rule)
    ctx.check(rule)
    candidates = body_only_vars(rule)
    lits = rule.body_ge2
    padded = {l: pre_pad(l, ctx) for l in lits}
    for l1 in lits:
        t1 = padded[l1]
        for v in skipped(l1, ctx) & candidates:
            if not any(v in l2.vars and padded[l2] < t1 for l2 in lits):
                return False
    return True
