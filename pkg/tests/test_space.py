import pytest

from rulesym import SafetyContext, Signature, enumerate_rules, is_safe, parse_rule, parse_signature, space_stats
from rulesym.rules import PredicateSym
from rulesym.space import (
    SpaceConfig, benchmark_scaling, canon_closure_violations, enumerate_safe, variant_classes,
)

from oracles import naive_classes, naive_space


def sig(head_arity, *body):
    return Signature(PredicateSym("h", head_arity), frozenset(PredicateSym(n, a) for n, a in body))


def test_single_unary_rule():
    cfg = SpaceConfig(sig(1, ("p", 1)), 1, 1)
    assert [str(r) for r in enumerate_rules(cfg)] == ["h(A) :- p(A)."]


def test_binary_needs_repeat():
    cfg = SpaceConfig(sig(1, ("p", 2)), 1, 2)
    assert [str(r) for r in enumerate_rules(cfg)] == ["h(A) :- p(A,A)."]
    assert list(enumerate_rules(SpaceConfig(sig(1, ("p", 2)), 1, 2, allow_repeats=False))) == []


def test_zendo_space_contains_intro_rules(rules):
    zendo = parse_signature("head zendo/1\nbody piece/2\nbody size/2\nbody blue/1\nbody small/1")
    space = set(enumerate_rules(SpaceConfig(zendo, 4, 3)))
    assert rules["zendo_r1"] in space and rules["zendo_r2"] in space


@pytest.mark.parametrize("head_arity,preds,max_body,max_vars,repeats", [
    (1, [("p", 2)], 3, 4, True),
    (2, [("p", 2)], 3, 5, True),
    (1, [("p", 2), ("q", 1)], 3, 4, True),
    (2, [("p", 2), ("q", 1)], 2, 4, True),
    (1, [("p", 3)], 2, 4, True),
    (0, [("e", 2)], 3, 3, True),
    (1, [("p", 2), ("q", 1)], 3, 4, False),
])
@pytest.mark.parametrize("singletons", [False, True])
def test_matches_naive_generator(head_arity, preds, max_body, max_vars, repeats, singletons):
    cfg = SpaceConfig(sig(head_arity, *preds), max_body, max_vars, allow_repeats=repeats,
                      allow_singletons=singletons)
    got = list(enumerate_rules(cfg))
    assert len(got) == len(set(got))
    assert got == sorted(got, key=lambda r: r.key())
    assert set(got) == naive_space("h", head_arity, preds, max_body, max_vars, repeats, singletons)


# Counts from the enumerator, cross-checked against the naive generator and
# the permutation-canonical-form class oracle when the values were frozen.
FROZEN = [
    (1, [("p", 2)], 3, 5, 37, 28, 24),
    (2, [("p", 2)], 3, 5, 94, 82, 82),
    (1, [("p", 2), ("q", 1)], 3, 5, 69, 54, 50),
    (2, [("p", 2), ("q", 1)], 3, 5, 160, 148, 148),
]


@pytest.mark.parametrize("head_arity,preds,max_body,max_vars,total,safe,classes", FROZEN)
def test_frozen_counts_and_classes(head_arity, preds, max_body, max_vars, total, safe, classes):
    cfg = SpaceConfig(sig(head_arity, *preds), max_body, max_vars)
    stats = space_stats(cfg, with_classes=True)
    assert (stats.total, stats.safe, stats.classes) == (total, safe, classes)
    assert stats.min_safe_per_class >= 1
    rules = list(enumerate_rules(cfg))
    assert len(naive_classes(rules)) == classes
    mine = {frozenset(c) for c in variant_classes(rules)}
    assert mine == {frozenset(c) for c in naive_classes(rules)}


def test_example_five_rules_need_singletons(rules):
    # D and E occur once in these rules, so only the singleton-permitting space has them
    plain = set(enumerate_rules(SpaceConfig(sig(2, ("p", 2)), 3, 5)))
    assert rules["ex5_r2"] not in plain and rules["ex5_r3"] not in plain
    cfg = SpaceConfig(sig(2, ("p", 2)), 3, 5, allow_singletons=True)
    space = set(enumerate_rules(cfg))
    assert rules["ex5_r2"] in space and rules["ex5_r3"] in space
    assert not is_safe(rules["ex5_r2"], cfg.ctx) and is_safe(rules["ex5_r3"], cfg.ctx)


def test_safe_subset_and_post_filter():
    cfg = SpaceConfig(sig(1, ("p", 2), ("q", 1)), 3, 4)
    ctx = SafetyContext(2)
    post = [r for r in enumerate_rules(cfg) if is_safe(r, ctx)]
    assert list(enumerate_safe(cfg)) == post
    stats = space_stats(cfg)
    assert stats.safe == len(post) <= stats.total


def test_canon_closure():
    for cfg in (SpaceConfig(sig(2, ("p", 2)), 3, 5), SpaceConfig(sig(1, ("p", 2), ("q", 1)), 3, 5),
                SpaceConfig(sig(2, ("p", 2)), 3, 5, allow_singletons=True)):
        assert canon_closure_violations(cfg) == []


def test_singleton_space_classes_match_naive():
    cfg = SpaceConfig(sig(2, ("p", 2)), 3, 5, allow_singletons=True)
    stats = space_stats(cfg, with_classes=True)
    rules = list(enumerate_rules(cfg))
    assert stats.min_safe_per_class >= 1
    assert {frozenset(c) for c in variant_classes(rules)} == {frozenset(c) for c in naive_classes(rules)}


def test_parallel_matches_serial():
    cfg = SpaceConfig(sig(1, ("p", 2), ("q", 1)), 3, 4)
    assert list(enumerate_rules(cfg, jobs=2)) == list(enumerate_rules(cfg))


def test_deterministic_stream():
    cfg = SpaceConfig(sig(2, ("p", 2)), 3, 5)
    assert [str(r) for r in enumerate_rules(cfg)] == [str(r) for r in enumerate_rules(cfg)]


def test_head_arity_only_is_all_safe():
    rows, done = benchmark_scaling(SpaceConfig(sig(2, ("p", 2), ("q", 1)), 3, 2), [2])
    assert done and rows[0].total == rows[0].safe > 0


def test_benchmark_budget():
    rows, done = benchmark_scaling(SpaceConfig(sig(1, ("p", 2)), 2, 2), [2, 3, 4], budget=-1)
    assert rows == [] and not done


def test_config_validation():
    with pytest.raises(ValueError):
        SpaceConfig(sig(2, ("p", 2)), 3, 1)
    with pytest.raises(ValueError):
        SpaceConfig(sig(1, ("p", 3)), 3, 4, k=2)
    with pytest.raises(ValueError):
        SpaceConfig(sig(1, ("p", 2)), 0, 4)


def test_incompleteness_r11_r12(rules):
    assert rules["r11"] != rules["r12"]
    assert is_safe(rules["r11"], SafetyContext(2)) and is_safe(rules["r12"], SafetyContext(2))
    assert parse_rule(str(rules["r11"])) == rules["r11"]
