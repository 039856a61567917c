"""Exact (exponential) body-variant and hypothesis-variant checks, plus the
graph encoding used to show the body-variant problem is GI-hard."""

from __future__ import annotations

import itertools
import warnings
from collections import Counter
from dataclasses import dataclass, field

from .rules import Hypothesis, Literal, Rule, Variable, apply_renaming, body_only_vars, clean

DEFAULT_CAP = 10
GRAPH_CAP = 8


class OracleLimitError(ValueError):
    """Input too large for exhaustive search."""


class IsolatedNodeWarning(UserWarning):
    pass


@dataclass(frozen=True)
class VariantWitness:
    renaming: dict = field(hash=False)


@dataclass(frozen=True)
class HypothesisWitness:
    # (rule of h1, matching rule of h2, renaming taking the first onto the second)
    pairs: tuple


def var_profiles(rule: Rule) -> dict[Variable, tuple]:
    """Per-variable multiset of (predicate, position) occurrences in the body.

    Invariant under renaming, so variables with different profiles can never
    be mapped onto each other.
    """
    occ: dict[Variable, Counter] = {}
    for l in rule.body:
        for pos, v in enumerate(l.args):
            occ.setdefault(v, Counter())[(l.name, pos)] += 1
    return {v: tuple(sorted(c.items())) for v, c in occ.items()}


def refined_colors(rule: Rule, rounds: int = 2) -> dict[Variable, object]:
    """Colour refinement over the rule's variables.

    Head variables start with their own identity as colour (renamings fix
    them); body-only variables start uncoloured.  Each round a variable's
    colour absorbs, for every literal it occurs in, its position and the
    colours of that literal's arguments.  The resulting colours are invariant
    under renamings of body-only variables.
    """
    colors: dict[Variable, object] = {v: (("head", v) if v in rule.head_vars else ("body",)) for v in rule.vars}
    for _ in range(rounds):
        seen: dict[Variable, list] = {v: [] for v in colors}
        for l in rule.body:
            shape = (l.name, tuple(colors[u] for u in l.args))
            for pos, v in enumerate(l.args):
                seen[v].append((pos, shape))
        colors = {v: (colors[v], tuple(sorted(seen[v]))) for v in colors}
    return colors


def _pred_multiset(rule: Rule) -> Counter:
    return Counter(l.pred for l in rule.body)


def _quick_reject(r1: Rule, r2: Rule) -> bool:
    return (
        r1.head != r2.head
        or len(r1.body) != len(r2.body)
        or len(r1.vars) != len(r2.vars)
        or len(body_only_vars(r1)) != len(body_only_vars(r2))
        or _pred_multiset(r1) != _pred_multiset(r2)
    )


def is_body_variant(r1: Rule, r2: Rule, cap: int = DEFAULT_CAP, prune: bool = True) -> VariantWitness | None:
    """Find the lexicographically smallest renaming of r1's body-only
    variables onto r2's that turns r1 into r2, or None.

    ``prune=False`` disables every heuristic and tries all permutations.
    """
    if _quick_reject(r1, r2):
        return None
    src = sorted(body_only_vars(r1))
    dst = sorted(body_only_vars(r2))
    if len(src) > cap:
        raise OracleLimitError(f"{len(src)} body-only variables exceed the oracle cap of {cap}")
    if not prune:
        for perm in itertools.permutations(dst):
            mapping = dict(zip(src, perm))
            if apply_renaming(r1, mapping) == r2:
                return VariantWitness(clean(mapping))
        return None

    p1, p2 = var_profiles(r1), var_profiles(r2)
    if sorted(p1[v] for v in src) != sorted(p2[v] for v in dst):
        return None
    candidates = [[w for w in dst if p2[w] == p1[v]] for v in src]
    depth = {v: i for i, v in enumerate(src)}
    fixed = r1.head_vars
    # literals become checkable once their deepest body-only variable is bound
    ready: list[list[Literal]] = [[] for _ in src]
    for l in r1.body:
        ds = [depth[v] for v in l.args if v not in fixed]
        if ds:
            ready[max(ds)].append(l)
        elif l not in r2.body:
            return None
    mapping: dict[Variable, Variable] = {}
    used: set[Variable] = set()

    def search(i: int) -> bool:
        if i == len(src):
            return True
        v = src[i]
        for w in candidates[i]:
            if w in used:
                continue
            mapping[v] = w
            if all(l.rename(mapping) in r2.body for l in ready[i]):
                used.add(w)
                if search(i + 1):
                    return True
                used.discard(w)
            del mapping[v]
        return False

    if not search(0):
        return None
    assert apply_renaming(r1, mapping) == r2
    return VariantWitness(clean(mapping))


def is_hypothesis_variant(h1: Hypothesis, h2: Hypothesis, cap: int = DEFAULT_CAP) -> HypothesisWitness | None:
    """Search all bijections between the rule sets for one whose pairs are
    body-variants.  The first pairing in sorted rule order is returned."""
    rules1, rules2 = list(h1), list(h2)
    if len(rules1) != len(rules2):
        return None
    table = [[is_body_variant(a, b, cap) for b in rules2] for a in rules1]
    chosen: list[int] = []

    def search(i: int) -> bool:
        if i == len(rules1):
            return True
        for j, w in enumerate(table[i]):
            if w is not None and j not in chosen:
                chosen.append(j)
                if search(i + 1):
                    return True
                chosen.pop()
        return False

    if not search(0):
        return None
    return HypothesisWitness(
        tuple((rules1[i], rules2[j], table[i][j].renaming) for i, j in enumerate(chosen))
    )


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset

    def __init__(self, n: int, edges):
        norm = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) outside 0..{n - 1}")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", frozenset(norm))

    def isolated(self) -> list[int]:
        touched = {x for e in self.edges for x in e}
        return [x for x in range(self.n) if x not in touched]

    def relabel(self, perm) -> Graph:
        return Graph(self.n, ((perm[u], perm[v]) for u, v in self.edges))


def parse_graph(text: str) -> Graph:
    lines = [ln.split("%", 1)[0].split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("empty graph file")
    n = int(lines[0])
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ValueError(f"expected 'u v', got {ln!r}")
        edges.append((int(parts[0]), int(parts[1])))
    return Graph(n, edges)


def graph_to_rule(g: Graph) -> Rule:
    """Encode ``g`` as ``h :- edge(..), ...`` with node i as variable i.

    Each undirected edge contributes both orientations so that graph
    isomorphisms and body renamings correspond exactly.
    """
    if g.n < 1:
        raise ValueError("graph needs at least one node")
    iso = g.isolated()
    if iso:
        warnings.warn(f"isolated nodes {iso} do not appear in the rule", IsolatedNodeWarning, stacklevel=2)
    body = []
    for u, v in g.edges:
        body.append(Literal("edge", (u, v)))
        body.append(Literal("edge", (v, u)))
    return Rule(Literal("h"), body)


def graphs_isomorphic(g1: Graph, g2: Graph, cap: int = GRAPH_CAP) -> bool:
    if max(g1.n, g2.n) > cap:
        raise OracleLimitError(f"graphs with more than {cap} nodes are too large")
    if g1.n != g2.n or len(g1.edges) != len(g2.edges):
        return False
    return any(g1.relabel(p).edges == g2.edges for p in itertools.permutations(range(g1.n)))
