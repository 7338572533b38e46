"""Rule-based syntactic simplification of constituency parse trees."""
from .dsl import DslSemanticError, DslSyntaxError, check_rules, default_ruleset, load_ruleset, load_ruleset_file
from .estimator import NounPhraseReducer, SentenceSimplifier, check_trees
from .npsimp import strip_premodifiers
from .rules import RuleSet, RuleSpec, apply_rule, match_rule
from .simplifier import (
    EngineOptions,
    GenerationCapReached,
    SimplificationResult,
    StepBudgetExceeded,
    necessary_pass,
    simplify,
    simplify_batch,
)
from .tree import MalformedTree, Tree, detokenize, find_nodes, parse_ptb, serialize, yield_tokens

__version__ = "0.1.0"

__all__ = [
    "DslSemanticError",
    "DslSyntaxError",
    "EngineOptions",
    "GenerationCapReached",
    "MalformedTree",
    "NounPhraseReducer",
    "RuleSet",
    "RuleSpec",
    "SentenceSimplifier",
    "SimplificationResult",
    "StepBudgetExceeded",
    "Tree",
    "apply_rule",
    "check_rules",
    "check_trees",
    "default_ruleset",
    "detokenize",
    "find_nodes",
    "load_ruleset",
    "load_ruleset_file",
    "match_rule",
    "necessary_pass",
    "parse_ptb",
    "serialize",
    "simplify",
    "simplify_batch",
    "strip_premodifiers",
    "yield_tokens",
]
