"""Exhaustive single-rule hypothesis spaces and pruning statistics."""

from __future__ import annotations

import itertools
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Iterator

from .canon import safe_variant
from .parser import Signature
from .rules import Literal, Rule, body_only_vars
from .safety import SafetyContext, is_safe
from .variants import DEFAULT_CAP, is_body_variant, refined_colors


class SoundnessError(AssertionError):
    """A body-variant class has no safe member."""


@dataclass(frozen=True)
class SpaceConfig:
    signature: Signature
    max_body: int
    max_vars: int
    k: int | None = None
    allow_repeats: bool = True
    allow_singletons: bool = False

    def __post_init__(self):
        if self.max_body < 1 or self.max_vars < 1:
            raise ValueError("max_body and max_vars must be positive")
        if self.max_vars < self.signature.head_pred.arity:
            raise ValueError(
                f"max_vars={self.max_vars} is below the head arity {self.signature.head_pred.arity}"
            )
        if self.k is not None and self.k < self.signature.max_body_arity:
            raise ValueError(f"k={self.k} is below the maximum body arity {self.signature.max_body_arity}")

    @property
    def ctx(self) -> SafetyContext:
        return SafetyContext(self.k if self.k is not None else self.signature.default_k())

    @property
    def head(self) -> Literal:
        return Literal(self.signature.head_pred.name, tuple(range(self.signature.head_pred.arity)))

    def literals(self) -> list[Literal]:
        out = []
        for p in sorted(self.signature.body_preds):
            if self.allow_repeats:
                tuples = itertools.product(range(self.max_vars), repeat=p.arity)
            else:
                tuples = itertools.permutations(range(self.max_vars), p.arity)
            out.extend(Literal(p.name, t) for t in tuples)
        return sorted(out)


def _search(cfg: SpaceConfig, lits: list[Literal], first: int | None = None) -> Iterator[Rule]:
    head = cfg.head
    n = len(lits)
    max_ar = max((l.arity for l in lits), default=0)
    occ = [0] * cfg.max_vars
    for v in head.args:
        occ[v] += 1
    # head variables must reach the body; others need a second occurrence
    # unless singletons are permitted
    need = [2 if v < len(head.args) or not cfg.allow_singletons else 1 for v in range(cfg.max_vars)]
    chosen: list[int] = []

    def complete() -> bool:
        top = max((v for v in range(cfg.max_vars) if occ[v]), default=-1)
        return all(occ[v] >= need[v] for v in range(top + 1))

    def deficit() -> int:
        top = max((v for v in range(cfg.max_vars) if occ[v]), default=-1)
        return sum(max(0, need[v] - occ[v]) for v in range(top + 1))

    def dfs(start: int):
        if chosen and complete():
            yield Rule(head, (lits[i] for i in chosen))
        room = cfg.max_body - len(chosen)
        if room == 0:
            return
        stop = n if first is None or chosen else first + 1
        for i in range(start, stop):
            l = lits[i]
            for v in l.args:
                occ[v] += 1
            chosen.append(i)
            if deficit() <= (room - 1) * max_ar:
                yield from dfs(i + 1)
            chosen.pop()
            for v in l.args:
                occ[v] -= 1

    yield from dfs(0 if first is None else first)


def _partition(args) -> list[Rule]:
    cfg, first = args
    return list(_search(cfg, cfg.literals(), first))


def enumerate_rules(cfg: SpaceConfig, jobs: int = 1) -> Iterator[Rule]:
    """Every valid rule of the space, once each, in canonical sorted order."""
    lits = cfg.literals()
    if jobs <= 1:
        yield from _search(cfg, lits)
        return
    with ProcessPoolExecutor(jobs) as pool:
        parts = pool.map(_partition, [(cfg, i) for i in range(len(lits))])
        for part in parts:
            yield from part


def enumerate_safe(cfg: SpaceConfig, jobs: int = 1) -> Iterator[Rule]:
    ctx = cfg.ctx
    return (r for r in enumerate_rules(cfg, jobs) if is_safe(r, ctx))


def class_key(rule: Rule) -> tuple:
    """Renaming-invariant bucket key: rules in different buckets are never variants."""
    colors = refined_colors(rule)
    return (
        rule.head,
        len(rule.body),
        tuple(sorted(repr(colors[v]) for v in body_only_vars(rule))),
    )


def variant_classes(rules, cap: int = DEFAULT_CAP) -> list[list[Rule]]:
    """Partition ``rules`` into body-variant classes with the exact oracle.

    Each rule is compared against one representative per class in its bucket;
    variance is an equivalence relation so this matches full pairwise union-find.
    Classes come out ordered by their first member.
    """
    buckets: dict[tuple, list[list[Rule]]] = defaultdict(list)
    classes: list[list[Rule]] = []
    for r in rules:
        for cls in buckets[class_key(r)]:
            if is_body_variant(cls[0], r, cap) is not None:
                cls.append(r)
                break
        else:
            cls = [r]
            buckets[class_key(r)].append(cls)
            classes.append(cls)
    return classes


@dataclass
class SpaceStats:
    vars: int
    total: int
    safe: int
    classes: int | None = None
    max_safe_per_class: int | None = None
    min_safe_per_class: int | None = None
    gen_time: float = field(default=0.0, compare=False)
    prune_time: float = field(default=0.0, compare=False)

    CSV_COLUMNS = ("vars", "total", "safe", "classes", "max_safe_per_class", "gen_ms", "prune_ms")

    def row(self, timings: bool = True) -> dict:
        out = {
            "vars": self.vars,
            "total": self.total,
            "safe": self.safe,
            "classes": self.classes,
            "max_safe_per_class": self.max_safe_per_class,
            "min_safe_per_class": self.min_safe_per_class,
        }
        if timings:
            out["gen_ms"] = round(self.gen_time * 1000, 3)
            out["prune_ms"] = round(self.prune_time * 1000, 3)
        return out


def space_stats(cfg: SpaceConfig, with_classes: bool = False, class_cap: int = 200_000,
                jobs: int = 1) -> SpaceStats:
    t0 = time.perf_counter()
    rules = list(enumerate_rules(cfg, jobs))
    t1 = time.perf_counter()
    ctx = cfg.ctx
    safe = {r for r in rules if is_safe(r, ctx)}
    t2 = time.perf_counter()
    stats = SpaceStats(cfg.max_vars, len(rules), len(safe), gen_time=t1 - t0, prune_time=t2 - t1)
    if with_classes:
        if len(rules) > class_cap:
            raise ValueError(f"{len(rules)} rules exceed the class computation cap of {class_cap}")
        classes = variant_classes(rules)
        per_class = [sum(r in safe for r in cls) for cls in classes]
        stats.classes = len(classes)
        stats.max_safe_per_class = max(per_class, default=0)
        stats.min_safe_per_class = min(per_class, default=0)
        if per_class and stats.min_safe_per_class < 1:
            bad = next(cls for cls, n in zip(classes, per_class) if n == 0)
            raise SoundnessError(f"variant class of {bad[0]} has no safe member")
    return stats


def canon_closure_violations(cfg: SpaceConfig, rules=None) -> list[Rule]:
    """Rules whose safe variant is not itself in the enumerated space."""
    rules = list(enumerate_rules(cfg)) if rules is None else rules
    members = set(rules)
    ctx = cfg.ctx
    return [r for r in rules if safe_variant(r, ctx).final not in members]


@dataclass
class BenchRow:
    vars: int
    total: int
    safe: int
    gen_time_with: float
    gen_time_without: float

    @property
    def ratio(self) -> float:
        return self.safe / self.total if self.total else 1.0


def benchmark_scaling(base: SpaceConfig, var_range, budget: float | None = None) -> tuple[list[BenchRow], bool]:
    """Time plain enumeration against enumeration with safety pruning for
    each variable bound.  Returns ``(rows, completed)``; ``completed`` is
    False when the wall-clock budget ran out first."""
    rows = []
    start = time.perf_counter()
    for nv in var_range:
        if budget is not None and time.perf_counter() - start > budget:
            return rows, False
        cfg = replace(base, max_vars=nv)
        t0 = time.perf_counter()
        total = sum(1 for _ in enumerate_rules(cfg))
        t1 = time.perf_counter()
        safe = sum(1 for _ in enumerate_safe(cfg))
        t2 = time.perf_counter()
        rows.append(BenchRow(nv, total, safe, gen_time_with=t2 - t1, gen_time_without=t1 - t0))
    return rows, True
