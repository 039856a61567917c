import itertools

import pytest
from hypothesis import given, settings, strategies as st

from rulesym import Rule, SafetyContext, emit_encoding, evaluate_encoding, is_safe, lit, parse_signature
from rulesym.asp import CONSTRAINT, EncodingError, count_models, find_solver
from rulesym.space import SpaceConfig, enumerate_rules, enumerate_safe

P2 = parse_signature("head h/2\nbody p/2")
P3 = parse_signature("head h/1\nbody p/3\nbody q/2")
ZENDO = parse_signature("head zendo/1\nbody piece/2\nbody size/2\nbody blue/1\nbody small/1")


def facts(doc, pred):
    return [f[1:] for f in doc.facts if f[0] == pred]


def test_published_fact_examples():
    four = emit_encoding(parse_signature("head h/1\nbody p/2\nbody r/4"), 5)
    assert "padded_vars((4,1),(0,0,4,1))." in four.text().splitlines()
    doc = emit_encoding(P3, 5)
    lines = doc.text().splitlines()
    assert "lower((0,0,1),(0,0,2))." in lines
    assert "skipped((0,1,3),2)." in lines
    assert "ordered_vars((0,0,1),(0,0,1))." in lines
    assert "skipped((1,3,5),2)." not in lines  # variable 5 is beyond max_vars
    wide = emit_encoding(P3, 6)
    assert {"skipped((1,3,5),2).", "skipped((1,3,5),4)."} <= set(wide.text().splitlines())


def test_skipped_facts_are_sound():
    for doc in (emit_encoding(P2, 5), emit_encoding(P3, 5), emit_encoding(P2, 4, 3)):
        padded = {b for _, b in facts(doc, "ordered_vars")}
        got = set(facts(doc, "skipped"))
        expected = {(t, y) for t in padded for y in range(doc.max_vars) if t[0] < y < t[-1] and y not in t}
        assert got == expected


def test_lower_is_strict_total_order_on_sorted_tuples():
    doc = emit_encoding(P3, 4)
    lower = set(facts(doc, "lower"))
    tuples = sorted({b for _, b in facts(doc, "ordered_vars")})
    assert all(list(t) == sorted(t) and len(t) == doc.k for t in tuples)
    for a, b in itertools.permutations(tuples, 2):
        assert ((a, b) in lower) != ((b, a) in lower)
        assert ((a, b) in lower) == (a < b)
    assert not any((a, a) in lower for a in tuples)


def test_unary_tuples_never_get_padded():
    doc = emit_encoding(ZENDO, 3)
    assert all(len(a) >= 2 for a, _ in facts(doc, "padded_vars"))


def test_var_member_argument_order():
    doc = emit_encoding(P2, 3)
    assert "var_member(1,(0,1))." in doc.text().splitlines()


def test_rules_one_per_line_and_header():
    text = emit_encoding(P2, 3).text()
    lines = text.splitlines()
    assert lines[0].startswith("% rulesym ")
    assert "% k: 2" in lines and "% max_vars: 3" in lines
    assert CONSTRAINT in lines
    assert all(l.endswith(".") or l.startswith("%") or not l for l in lines)
    assert "body_var(Rule,V):- blit(Rule,_,Vars), var_member(V,Vars), not head_var(Rule,V)." in lines
    no_defs = emit_encoding(P2, 3, body_var_defs=False).text()
    assert "body_var(" not in no_defs.replace(CONSTRAINT, "")


def test_deterministic_emission():
    assert emit_encoding(ZENDO, 4).text() == emit_encoding(ZENDO, 4).text()
    assert emit_encoding(P2, 3, standalone=True, max_body=2).text() == \
        emit_encoding(P2, 3, standalone=True, max_body=2).text()


def test_errors():
    with pytest.raises(EncodingError):
        emit_encoding(P3, 3, k=2)
    with pytest.raises(EncodingError):
        emit_encoding(P2, 0)
    with pytest.raises(EncodingError):
        emit_encoding(P2, 3, standalone=True)
    doc = emit_encoding(P2, 3)
    with pytest.raises(EncodingError):
        evaluate_encoding(Rule(lit("h", 0, 1), [lit("p", 0, 4), lit("p", 4, 1)]), doc)
    with pytest.raises(EncodingError):
        evaluate_encoding(Rule(lit("h", 0, 1), [lit("q", 0, 1)]), doc)


def test_intro_rules(rules):
    doc = emit_encoding(ZENDO, 3)
    assert evaluate_encoding(rules["zendo_r1"], doc) is False
    assert evaluate_encoding(rules["zendo_r2"], doc) is True


@pytest.mark.parametrize("defs", [True, False])
@pytest.mark.parametrize("text,max_body,max_vars,k", [
    ("head h/2\nbody p/2", 3, 5, None),
    ("head h/1\nbody p/2\nbody q/1", 3, 5, None),
    ("head h/1\nbody p/3", 2, 4, None),
    ("head h/1\nbody p/2\nbody q/1", 3, 4, 3),
])
def test_agrees_with_safety_on_spaces(defs, text, max_body, max_vars, k):
    sig = parse_signature(text)
    cfg = SpaceConfig(sig, max_body, max_vars, k)
    doc = emit_encoding(sig, max_vars, k, body_var_defs=defs)
    ctx = cfg.ctx
    for r in enumerate_rules(cfg):
        assert evaluate_encoding(r, doc) == (not is_safe(r, ctx)), str(r)


@settings(max_examples=300, deadline=None)
@given(st.lists(st.tuples(st.sampled_from(["p", "q", "r"]), st.lists(st.integers(0, 6), min_size=3, max_size=3)),
                min_size=1, max_size=6),
       st.integers(0, 2))
def test_agrees_with_safety_on_random_rules(body, head_arity):
    # arities: p/2, q/1, r/3; singletons and gaps allowed, the semantics do not need them
    ar = {"p": 2, "q": 1, "r": 3}
    rule = Rule(lit("h", *range(head_arity)), [lit(n, *a[:ar[n]]) for n, a in body])
    doc = _random_doc(head_arity)
    assert evaluate_encoding(rule, doc) == (not is_safe(rule, SafetyContext(3)))


_DOC = {}


def _random_doc(head_arity):
    if head_arity not in _DOC:
        sig = parse_signature(f"head h/{head_arity}\nbody p/2\nbody q/1\nbody r/3")
        _DOC[head_arity] = emit_encoding(sig, 7)
    return _DOC[head_arity]


def test_standalone_skeleton_shape():
    text = emit_encoding(parse_signature("head h/1\nbody p/2"), 3, standalone=True, max_body=2).text()
    assert "#show blit/3." in text
    assert "head_tuple((0,))." in text
    assert ":- rule(R), #count{P,Vs: blit(R,P,Vs)} > 2." in text


@pytest.mark.skipif(find_solver() is None, reason="no ASP solver on PATH")
def test_solver_model_count_matches_enumerator(tmp_path):
    sig = parse_signature("head h/1\nbody p/2")
    path = tmp_path / "enc.lp"
    path.write_text(emit_encoding(sig, 3, standalone=True, max_body=2).text())
    expected = sum(1 for _ in enumerate_safe(SpaceConfig(sig, 2, 3)))
    assert count_models(str(path)) == expected


def test_count_models_without_solver(tmp_path):
    with pytest.raises(FileNotFoundError):
        count_models(str(tmp_path / "x.lp"), executable="definitely-not-a-solver-binary")
