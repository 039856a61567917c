"""Symmetry-breaking ASP encoding: emission and native evaluation.

The emitted program is meant to be added to a Popper-style generator that
represents a rule with ``hlit/3`` and ``blit/3`` atoms (variables as integers,
0 for A).  :func:`evaluate_encoding` computes the same stratified semantics in
Python so the encoding can be checked against the safety module without a
solver.
"""

from __future__ import annotations

import itertools
import os
import re
import shutil
import subprocess
from dataclasses import dataclass, field
from functools import cached_property

from . import __version__
from .parser import Signature
from .rules import Rule

APPEARS = (
    "appears(Rule,OrderedVars):- blit(Rule,_,Vars), padded_vars(Vars,PaddedVars), "
    "ordered_vars(PaddedVars,OrderedVars)."
)
WITNESSED = (
    "witnessed(Rule,V,Vars1):- appears(Rule,Vars1), skipped(Vars1,V), "
    "lower(Vars2,Vars1), var_member(V,Vars2), appears(Rule,Vars2)."
)
CONSTRAINT = ":- body_var(Rule,V), appears(Rule,Vars), skipped(Vars,V), not witnessed(Rule,V,Vars)."
RULE_BLOCKS = (APPEARS, WITNESSED, CONSTRAINT)

BODY_VAR_DEFS = (
    "head_var(Rule,V):- hlit(Rule,_,Vars), var_member(V,Vars).",
    "body_var(Rule,V):- blit(Rule,_,Vars), var_member(V,Vars), not head_var(Rule,V).",
)

SOLVER_ENV = "RULESYM_ASP_SOLVER"


class EncodingError(ValueError):
    pass


def term(x) -> str:
    if isinstance(x, tuple):
        if len(x) == 1:
            return f"({term(x[0])},)"
        return "(" + ",".join(term(y) for y in x) + ")"
    return str(x)


def fact(pred: str, *args) -> str:
    return f"{pred}({','.join(term(a) for a in args)})."


def pad(t: tuple, k: int) -> tuple:
    return (0,) * max(0, k - len(t)) + t


@dataclass(frozen=True)
class EncodingDoc:
    signature: Signature
    max_vars: int
    k: int
    header: tuple[str, ...]
    facts: tuple[tuple, ...]  # (predicate, arg, arg)
    rules: tuple[str, ...]
    generator: tuple[str, ...] = ()
    body_var_defs: bool = True

    def text(self) -> str:
        lines = list(self.header)
        lines.append("")
        lines += [fact(*f) for f in self.facts]
        lines.append("")
        lines += list(self.rules)
        if self.generator:
            lines.append("")
            lines += list(self.generator)
        return "\n".join(lines) + "\n"

    @cached_property
    def tables(self) -> dict[str, object]:
        t: dict[str, dict] = {"padded_vars": {}, "ordered_vars": {}, "var_member": {},
                              "skipped": {}, "lower": {}}
        for pred, a, b in (f for f in self.facts if len(f) == 3):
            if pred in ("padded_vars", "ordered_vars"):
                t[pred][a] = b
            elif pred == "var_member":
                t[pred].setdefault(b, set()).add(a)
            elif pred == "skipped":
                t[pred].setdefault(a, set()).add(b)
            elif pred == "lower":
                t[pred].setdefault(b, set()).add(a)
        return t


def emit_encoding(sig: Signature, max_vars: int, k: int | None = None, *,
                  body_var_defs: bool = True, standalone: bool = False,
                  max_body: int | None = None) -> EncodingDoc:
    """Build the encoding for rules over ``sig`` with variables ``0..max_vars-1``.

    ``standalone`` appends a generator skeleton (choice rules plus the
    structural rule constraints) so a solver can enumerate the safe rules of
    a ``max_body``-bounded space on its own.
    """
    if max_vars < 1:
        raise EncodingError("max_vars must be at least 1")
    k = sig.default_k() if k is None else k
    if k < sig.max_body_arity:
        raise EncodingError(f"k={k} is below the maximum body arity {sig.max_body_arity}")
    if standalone and not max_body:
        raise EncodingError("a standalone encoding needs max_body")

    facts: set[tuple] = set()
    ordered: set[tuple] = set()
    arities = sorted({p.arity for p in sig.body_preds if p.arity >= 2})
    for a in arities:
        for t in itertools.product(range(max_vars), repeat=a):
            p = pad(t, k)
            facts.add(("padded_vars", t, p))
            facts.add(("ordered_vars", p, tuple(sorted(p))))
            ordered.add(tuple(sorted(p)))
    for t in ordered:
        for v in set(t):
            facts.add(("var_member", v, t))
        for v in range(t[0] + 1, t[-1]):
            if v not in t:
                facts.add(("skipped", t, v))
    for t1, t2 in itertools.combinations(sorted(ordered), 2):
        facts.add(("lower", t1, t2))
    raw_arities = {p.arity for p in sig.preds}
    if body_var_defs or standalone:
        for a in raw_arities:
            for t in itertools.product(range(max_vars), repeat=a):
                for v in set(t):
                    facts.add(("var_member", v, t))

    rules = list(RULE_BLOCKS)
    if body_var_defs:
        rules += BODY_VAR_DEFS
    generator = _generator(sig, max_vars, max_body) if standalone else ()
    header = (
        f"% rulesym {__version__} symmetry-breaking encoding",
        f"% signature: head {sig.head_pred}; body {', '.join(str(p) for p in sorted(sig.body_preds))}",
        f"% max_vars: {max_vars}",
        f"% k: {k}",
    )
    order = {"var_member": 0, "padded_vars": 1, "ordered_vars": 2, "skipped": 3, "lower": 4}
    fact_list = sorted(facts, key=lambda f: (order[f[0]], f[1:]) if f[0] != "var_member" else (0, f[2], f[1]))
    return EncodingDoc(sig, max_vars, k, header, tuple(fact_list), tuple(rules), tuple(generator), body_var_defs)


def _generator(sig: Signature, max_vars: int, max_body: int) -> list[str]:
    head = sig.head_pred
    out = ["% generator skeleton", "rule(0)."]
    out.append(fact("hpred", head.name, head.arity))
    out += [fact("bpred", p.name, p.arity) for p in sorted(sig.body_preds)]
    out += [fact("var", v) for v in range(max_vars)]
    for a in sorted({p.arity for p in sig.preds}):
        for t in itertools.product(range(max_vars), repeat=a):
            out.append(fact("vars", t, a))
            out += [fact("var_pos", v, t, i) for i, v in enumerate(t)]
    out.append(fact("head_tuple", tuple(range(head.arity))))
    out += [
        "{hlit(Rule,Pred,Vars)}:- rule(Rule), vars(Vars,Arity), hpred(Pred,Arity).",
        "{blit(Rule,Pred,Vars)}:- rule(Rule), vars(Vars,Arity), bpred(Pred,Arity).",
        ":- rule(R), #count{P,Vs: hlit(R,P,Vs)} != 1.",
        ":- hlit(R,_,Vs), not head_tuple(Vs).",
        ":- rule(R), not blit(R,_,_).",
        f":- rule(R), #count{{P,Vs: blit(R,P,Vs)}} > {max_body}.",
        "in_body(R,V):- blit(R,_,Vs), var_member(V,Vs).",
        "used(R,V):- in_body(R,V).",
        "used(R,V):- hlit(R,_,Vs), var_member(V,Vs).",
        ":- used(R,V), V > 0, not used(R,V-1).",
        ":- hlit(R,_,Vs), var_member(V,Vs), not in_body(R,V).",
        ":- used(R,V), #count{b,P,Vs,I: blit(R,P,Vs), var_pos(V,Vs,I); "
        "h,P,Vs,I: hlit(R,P,Vs), var_pos(V,Vs,I)} < 2.",
        "#show blit/3.",
    ]
    return out


def evaluate_encoding(rule: Rule, doc: EncodingDoc) -> bool:
    """True iff the encoding's constraint fires for ``rule`` (it is pruned).

    The rule becomes ``hlit(0,..)``/``blit(0,..)`` atoms; ``appears``,
    ``witnessed`` and ``body_var`` are then computed bottom-up from the
    document's facts.
    """
    known = {p.name: p.arity for p in doc.signature.preds}
    for l in (rule.head, *rule.body):
        if known.get(l.name) != l.arity:
            raise EncodingError(f"{l} is not in the encoded signature")
        if any(v >= doc.max_vars for v in l.args):
            raise EncodingError(f"{l} uses a variable beyond max_vars={doc.max_vars}")

    t = doc.tables
    padded, ordered, member = t["padded_vars"], t["ordered_vars"], t["var_member"]
    skipped, lower = t["skipped"], t["lower"]

    def members(tup):
        # var_member facts for raw tuples are only emitted with the body_var rules
        return member.get(tup) or set(tup)

    head_var = set(members(rule.head.args)) if rule.head.args else set()
    body_var = {v for l in rule.body for v in members(l.args)} - head_var

    appears = set()
    for l in rule.body:
        p = padded.get(l.args)
        if p is not None:
            appears.add(ordered[p])

    witnessed = set()
    for vars1 in appears:
        for v in skipped.get(vars1, ()):
            for vars2 in lower.get(vars1, ()):
                if vars2 in appears and v in member.get(vars2, ()):
                    witnessed.add((v, vars1))
                    break

    return any(
        v in body_var and (v, vars1) not in witnessed
        for vars1 in appears
        for v in skipped.get(vars1, ())
    )


def find_solver(executable: str | None = None) -> str | None:
    return shutil.which(executable or os.environ.get(SOLVER_ENV) or "clingo")


def count_models(path: str, executable: str | None = None, timeout: float = 600) -> int:
    """Run an external clingo-compatible solver and return the model count."""
    exe = find_solver(executable)
    if exe is None:
        raise FileNotFoundError("no ASP solver found on PATH")
    proc = subprocess.run([exe, "--models=0", "--quiet=2", path],
                          capture_output=True, text=True, timeout=timeout)
    # clingo exits with 10/20/30 for SAT/UNSAT/exhausted
    if proc.returncode not in (0, 10, 20, 30):
        raise RuntimeError(f"solver failed ({proc.returncode}): {proc.stderr.strip()}")
    if "UNSATISFIABLE" in proc.stdout:
        return 0
    m = re.search(r"^Models\s*:\s*(\d+)", proc.stdout, re.M)
    if not m:
        raise RuntimeError("could not find a model count in solver output")
    return int(m.group(1))
