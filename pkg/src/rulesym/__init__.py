"""Symmetry breaking for definite-clause hypothesis spaces."""

__version__ = "0.1.0"

from .rules import (  # noqa: E402
    Hypothesis,
    Literal,
    PredicateSym,
    Rule,
    RuleError,
    Violation,
    apply_renaming,
    body_only_vars,
    lit,
    normalize,
    validate,
    var_name,
)
from .parser import ParseError, Signature, parse_hypothesis, parse_rule, parse_rules, parse_signature, render_rule  # noqa: E402
from .safety import (  # noqa: E402
    SafetyContext,
    SafetyError,
    is_safe,
    is_witnessed,
    lex_less,
    ordered_vars,
    pre_pad,
    skipped,
    unsafe_vars,
)
from .canon import CanonTrace, safe_variant  # noqa: E402
from .variants import (  # noqa: E402
    Graph,
    OracleLimitError,
    graph_to_rule,
    graphs_isomorphic,
    is_body_variant,
    is_hypothesis_variant,
)
from .space import SpaceConfig, SpaceStats, benchmark_scaling, enumerate_rules, space_stats  # noqa: E402
from .asp import EncodingDoc, emit_encoding, evaluate_encoding  # noqa: E402
