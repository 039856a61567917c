"""Rewrite a rule into a body-variant whose body-only variables are all safe."""

from __future__ import annotations

from dataclasses import dataclass, field

from .rules import Literal, Rule, Variable, apply_renaming, compose, format_renaming, var_name
from .safety import SafetyContext, pre_pad, skipped, unsafe_vars


class CanonError(RuntimeError):
    """The rewriting loop failed to make progress."""


@dataclass(frozen=True)
class CanonStep:
    unsafe_var: Variable
    pivot: Literal
    renaming: dict = field(hash=False)

    def __str__(self):
        return f"{var_name(self.unsafe_var)}\t{self.pivot}\t{format_renaming(self.renaming)}"


@dataclass(frozen=True)
class CanonTrace:
    original: Rule
    steps: tuple[CanonStep, ...]
    final: Rule
    composed: dict = field(hash=False)

    def format(self) -> str:
        lines = [str(s) for s in self.steps]
        lines.append(f"final\t{self.final}\t{format_renaming(self.composed)}")
        return "\n".join(lines)


def step_renaming(smallest: Variable, pivot_var: Variable, top: Variable) -> dict:
    """Swap ``pivot_var`` down to ``smallest`` through the fresh variable
    ``top + 1`` and close the gap by shifting ``pivot_var+1..top+1`` down one.

    Both parts are composed into a single simultaneous map.
    """
    fresh = top + 1
    swap = {pivot_var: smallest, smallest: fresh}
    shift = {j + 1: j for j in range(pivot_var, fresh)}
    return {x: y for x, y in compose(swap, shift).items() if x <= top}


def pivot_literal(rule: Rule, v: Variable, ctx: SafetyContext) -> Literal:
    skippers = [l for l in rule.body_ge2 if v in skipped(l, ctx)]
    return min(skippers, key=lambda l: (pre_pad(l, ctx), l.name, l.args))


def safe_variant(rule: Rule, ctx: SafetyContext | None = None) -> CanonTrace:
    ctx = ctx or SafetyContext.for_rule(rule)
    ctx.check(rule)
    current = rule
    steps = []
    composed: dict = {}
    floor = -1
    limit = len(rule.vars)
    while True:
        bad = unsafe_vars(current, ctx)
        if not bad:
            break
        smallest = min(bad)
        if smallest <= floor:
            raise CanonError(
                f"smallest unsafe variable did not increase ({var_name(smallest)} after {var_name(floor)})"
            )
        if len(steps) >= limit:
            raise CanonError(f"no safe variant after {limit} steps")
        floor = smallest
        pivot = pivot_literal(current, smallest, ctx)
        pivot_var = min(x for x in pivot.vars if x > smallest)
        sigma = step_renaming(smallest, pivot_var, max(current.vars))
        current = apply_renaming(current, sigma)
        steps.append(CanonStep(smallest, pivot, sigma))
        composed = compose(composed, sigma)
    return CanonTrace(rule, tuple(steps), current, composed)
