"""Command-line interface.

Exit codes: 0 success, 1 negative domain answer (unsafe rule, not a variant),
2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
import warnings
from pathlib import Path

from . import __version__
from .asp import EncodingError, emit_encoding
from .canon import safe_variant
from .parser import ParseError, parse_hypothesis, parse_rules, parse_signature, render_rules
from .rules import RuleError, format_renaming, validate, var_name
from .safety import SafetyContext, SafetyError, is_safe, unsafe_report
from .space import SpaceConfig, SpaceStats, benchmark_scaling, enumerate_rules, space_stats
from .variants import OracleLimitError, graph_to_rule, is_body_variant, is_hypothesis_variant, parse_graph


class InputError(Exception):
    pass


def format_records(records: list[dict], fmt: str, columns=None) -> str:
    columns = list(columns or (records[0].keys() if records else []))
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        for r in records:
            w.writerow({c: "" if r.get(c) is None else r.get(c) for c in columns})
        return buf.getvalue()
    blocks = []
    for r in records:
        blocks.append("".join(f"{c}={'' if r.get(c) is None else r.get(c)}\n" for c in columns))
    return "\n".join(blocks)


def parse_kv(text: str) -> list[dict]:
    """Inverse of the ``kv`` output format (all values come back as strings)."""
    out, cur = [], {}
    for line in text.splitlines():
        if not line.strip():
            if cur:
                out.append(cur)
                cur = {}
            continue
        key, _, value = line.partition("=")
        cur[key] = value
    if cur:
        out.append(cur)
    return out


def parse_csv(text: str) -> list[dict]:
    return list(csv.DictReader(io.StringIO(text)))


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None


def _load_rules(path: str, signature=None, check_valid=True):
    try:
        items = parse_rules(_read(path), source=path)
    except ParseError as e:
        raise InputError(str(e)) from None
    for rule, line in items:
        try:
            problems = validate(rule, signature)
        except RuleError as e:
            raise InputError(f"{path}:{line}: {e}") from None
        if problems and check_valid:
            raise InputError(f"{path}:{line}: invalid rule {rule}: " + "; ".join(map(str, problems)))
    return [r for r, _ in items]


def _load_signature(path: str):
    try:
        return parse_signature(_read(path))
    except ParseError as e:
        raise InputError(f"{path}:{e.line}: {e.msg}") from None


def _ctx(args, rule, signature=None) -> SafetyContext:
    if args.k is not None:
        return SafetyContext(args.k)
    if signature is not None:
        return SafetyContext(signature.default_k())
    return SafetyContext.for_rule(rule)


def cmd_check(args, out) -> int:
    sig = _load_signature(args.signature) if args.signature else None
    rules = _load_rules(args.rules, sig)
    records = []
    for rule in rules:
        report = unsafe_report(rule, _ctx(args, rule, sig))
        records.append({
            "rule": str(rule),
            "status": "UNSAFE" if report else "SAFE",
            "unsafe": ",".join(var_name(v) for v in report),
            "offenders": ";".join(
                f"{var_name(v)}:{'|'.join(str(l) for l in lits)}" for v, lits in report.items()
            ),
        })
        if args.format == "text":
            if not report:
                out.write(f"SAFE    {rule}\n")
                continue
            names = ",".join(var_name(v) for v in report)
            out.write(f"UNSAFE  {{{names}}}  {rule}\n")
            for v, lits in report.items():
                for l in lits:
                    out.write(f"  {var_name(v)} is skipped by {l} and no lex-smaller literal contains it\n")
    if args.format != "text":
        out.write(format_records(records, args.format, ["rule", "status", "unsafe", "offenders"]))
    return 1 if any(r["status"] == "UNSAFE" for r in records) else 0


def cmd_canon(args, out) -> int:
    rules = _load_rules(args.rules)
    records = []
    for rule in rules:
        ctx = _ctx(args, rule)
        trace = safe_variant(rule, ctx)
        verified = is_body_variant(rule, trace.final) is not None and not unsafe_report(trace.final, ctx)
        rec = {
            "rule": str(rule),
            "canonical": str(trace.final),
            "steps": len(trace.steps),
            "renaming": format_renaming(trace.composed),
            "verified": "yes" if verified else "no",
        }
        records.append(rec)
        if args.format == "text":
            out.write(f"{trace.final}\n")
            if args.trace:
                for step in trace.steps:
                    out.write(f"  step {step}\n")
                out.write(f"  renaming {rec['renaming']}\n")
            out.write(f"  verified: {rec['verified']}\n")
    if args.format != "text":
        out.write(format_records(records, args.format))
    return 0 if all(r["verified"] == "yes" for r in records) else 1


def cmd_variant(args, out) -> int:
    if args.hypothesis:
        try:
            h1 = parse_hypothesis(_read(args.a), args.a)
            h2 = parse_hypothesis(_read(args.b), args.b)
        except ParseError as e:
            raise InputError(str(e)) from None
        w = is_hypothesis_variant(h1, h2)
        if w is None:
            out.write("NOT-VARIANT\n")
            return 1
        out.write("VARIANT\n")
        for r1, r2, ren in w.pairs:
            out.write(f"  {r1}  ->  {r2}  {format_renaming(ren)}\n")
        return 0
    rules_a, rules_b = _load_rules(args.a, check_valid=False), _load_rules(args.b, check_valid=False)
    if len(rules_a) != 1 or len(rules_b) != 1:
        raise InputError("each file must contain exactly one rule (use --hypothesis for rule sets)")
    w = is_body_variant(rules_a[0], rules_b[0], cap=args.cap)
    if w is None:
        out.write("NOT-VARIANT\n")
        return 1
    out.write(f"VARIANT {format_renaming(w.renaming)}\n")
    return 0


def _space_config(args, sig) -> SpaceConfig:
    try:
        return SpaceConfig(sig, args.max_body, args.max_vars, args.k, allow_repeats=not args.no_repeats,
                           allow_singletons=args.allow_singletons)
    except ValueError as e:
        raise InputError(str(e)) from None


def cmd_enumerate(args, out) -> int:
    cfg = _space_config(args, _load_signature(args.signature))
    stats = space_stats(cfg, with_classes=args.classes, jobs=args.jobs)
    if args.out:
        rules = enumerate_rules(cfg, args.jobs)
        if not args.no_symmetry:
            rules = (r for r in rules if is_safe(r, cfg.ctx))
        Path(args.out).write_text(render_rules(rules), encoding="utf-8")
    row = stats.row()
    if args.format == "text":
        for key, value in row.items():
            if value is not None:
                out.write(f"{key}: {value}\n")
    elif args.format == "csv":
        out.write(format_records([row], "csv", SpaceStats.CSV_COLUMNS))
    else:
        out.write(format_records([row], "kv"))
    return 0


def cmd_bench(args, out) -> int:
    args.max_vars = max(args.vars)
    cfg = _space_config(args, _load_signature(args.signature))
    rows, done = benchmark_scaling(cfg, args.vars, budget=args.budget)
    records = [{
        "vars": r.vars, "total": r.total, "safe": r.safe,
        "ratio": f"{r.ratio:.6f}",
        "gen_ms_with": round(r.gen_time_with * 1000, 3),
        "gen_ms_without": round(r.gen_time_without * 1000, 3),
    } for r in rows]
    out.write(format_records(records, "kv" if args.format == "kv" else "csv",
                             ["vars", "total", "safe", "ratio", "gen_ms_with", "gen_ms_without"]))
    if not done:
        print("budget exhausted; remaining variable counts skipped", file=sys.stderr)
    return 0


def cmd_emit_asp(args, out) -> int:
    sig = _load_signature(args.signature)
    try:
        doc = emit_encoding(sig, args.max_vars, args.k, body_var_defs=not args.no_body_var_defs,
                            standalone=args.standalone, max_body=args.max_body)
    except EncodingError as e:
        raise InputError(str(e)) from None
    if args.out:
        Path(args.out).write_text(doc.text(), encoding="utf-8")
    else:
        out.write(doc.text())
    return 0


def cmd_graph2rule(args, out) -> int:
    try:
        g = parse_graph(_read(args.graph))
    except ValueError as e:
        raise InputError(f"{args.graph}: {e}") from None
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        rule = graph_to_rule(g)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    out.write(f"{rule}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rulesym", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"rulesym {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def fmt(sp, choices=("text", "kv", "csv")):
        sp.add_argument("--format", choices=choices, default=choices[0])

    sp = sub.add_parser("check", help="report safe and unsafe rules")
    sp.add_argument("rules")
    sp.add_argument("signature", nargs="?")
    sp.add_argument("--k", type=int)
    fmt(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("canon", help="rewrite rules into safe body-variants")
    sp.add_argument("rules")
    sp.add_argument("--trace", action="store_true")
    sp.add_argument("--k", type=int)
    fmt(sp)
    sp.set_defaults(func=cmd_canon)

    sp = sub.add_parser("variant", help="decide body- or hypothesis-variance")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--hypothesis", action="store_true")
    sp.add_argument("--cap", type=int, default=10)
    sp.set_defaults(func=cmd_variant)

    for name, func, helptext in (("enumerate", cmd_enumerate, "enumerate a rule space"),
                                 ("bench", cmd_bench, "time pruned vs plain enumeration")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("signature")
        sp.add_argument("--max-body", type=int, required=True)
        sp.add_argument("--k", type=int)
        sp.add_argument("--no-repeats", action="store_true", help="forbid repeated variables in a literal")
        sp.add_argument("--allow-singletons", action="store_true",
                        help="admit body-only variables that occur only once")
        if name == "enumerate":
            sp.add_argument("--max-vars", type=int, required=True)
            sp.add_argument("--no-symmetry", action="store_true", help="dump all rules, not only safe ones")
            sp.add_argument("--classes", action="store_true", help="count body-variant classes")
            sp.add_argument("--out")
            sp.add_argument("--jobs", type=int, default=1)
            fmt(sp)
        else:
            sp.add_argument("--vars", type=int, nargs="+", required=True)
            sp.add_argument("--budget", type=float, help="wall-clock budget in seconds")
            fmt(sp, ("csv", "kv"))
        sp.set_defaults(func=func)

    sp = sub.add_parser("emit-asp", help="write the ASP symmetry-breaking encoding")
    sp.add_argument("signature")
    sp.add_argument("--max-vars", type=int, required=True)
    sp.add_argument("--k", type=int)
    sp.add_argument("--standalone", action="store_true", help="add a generator skeleton")
    sp.add_argument("--max-body", type=int, help="body size bound for --standalone")
    sp.add_argument("--no-body-var-defs", action="store_true")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_emit_asp)

    sp = sub.add_parser("graph2rule", help="encode a graph as a rule")
    sp.add_argument("graph")
    sp.set_defaults(func=cmd_graph2rule)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (InputError, RuleError, SafetyError, OracleLimitError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
