"""scikit-learn style wrappers around the simplification engine.

Trees are the "samples": ``X`` is a sequence of :class:`~sentsimp.tree.Tree`
objects or bracketed strings.  There is nothing to learn, so ``fit`` only
loads the rule set and freezes the engine options.
"""
from __future__ import annotations

from pathlib import Path

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .dsl import default_ruleset, load_ruleset, load_ruleset_file
from .npsimp import strip_premodifiers
from .rules import RuleSet
from .simplifier import EngineOptions, simplify
from .tree import Tree, parse_ptb

__all__ = ["SentenceSimplifier", "NounPhraseReducer", "check_trees"]

_OUTPUTS = ("sentences", "trees", "results")


def check_trees(X) -> list[Tree]:
    """Validate ``X`` as a sequence of trees, parsing bracketed strings.

    A bare string or tree is rejected rather than iterated, mirroring how
    scikit-learn refuses 1-d input where 2-d is expected.
    """
    if isinstance(X, (str, bytes, Tree)):
        raise TypeError("expected a sequence of trees, got a single item; wrap it in a list")
    try:
        items = list(X)
    except TypeError:
        raise TypeError(f"expected a sequence of trees, got {type(X).__name__}") from None
    out = []
    for i, item in enumerate(items):
        if isinstance(item, Tree):
            out.append(item)
        elif isinstance(item, str):
            try:
                out.append(parse_ptb(item))
            except ValueError as exc:
                raise ValueError(f"sample {i}: {exc}") from exc
        else:
            raise TypeError(f"sample {i}: expected Tree or str, got {type(item).__name__}")
    return out


def _resolve_rules(rules) -> RuleSet:
    if rules is None:
        return default_ruleset()
    if isinstance(rules, RuleSet):
        return rules
    if isinstance(rules, Path):
        return load_ruleset_file(rules)
    if isinstance(rules, str):
        # rule text always contains a "rule" header line; a path never does
        if "\n" in rules or rules.lstrip().startswith("rule "):
            return load_ruleset(rules)
        return load_ruleset_file(rules)
    raise TypeError(f"rules must be None, a RuleSet, a path or rule text, not {type(rules).__name__}")


class SentenceSimplifier(TransformerMixin, BaseEstimator):
    """Map each input tree to the list of its simplifications.

    Parameters
    ----------
    rules : None, RuleSet, path or rule text
        ``None`` uses the shipped twelve-rule set.
    np_replace : bool
        Strip premodifiers of base noun phrases first.
    emit_original : bool
        Include the base tree(s) in the output.
    rule_tags : iterable of str or None
        Keep only rules carrying one of these tags.
    max_generated, max_steps : int
        Engine caps; see :class:`~sentsimp.simplifier.EngineOptions`.
    output : {"sentences", "trees", "results"}
        What ``transform`` returns per sample.
    """

    def __init__(
        self,
        rules=None,
        np_replace: bool = False,
        emit_original: bool = True,
        rule_tags=None,
        max_generated: int = 512,
        max_steps: int = 10000,
        output: str = "sentences",
    ):
        self.rules = rules
        self.np_replace = np_replace
        self.emit_original = emit_original
        self.rule_tags = rule_tags
        self.max_generated = max_generated
        self.max_steps = max_steps
        self.output = output

    def fit(self, X=None, y=None):
        if self.output not in _OUTPUTS:
            raise ValueError(f"output must be one of {_OUTPUTS}, got {self.output!r}")
        if X is not None:
            check_trees(X)
        self.ruleset_ = _resolve_rules(self.rules)
        self.options_ = EngineOptions(
            np_replace=bool(self.np_replace),
            emit_original=bool(self.emit_original),
            rule_tag_filter=None if self.rule_tags is None else frozenset(self.rule_tags),
            max_generated=int(self.max_generated),
            max_steps=int(self.max_steps),
        )
        self.n_rules_ = len(self.ruleset_)
        return self

    def transform(self, X) -> list:
        check_is_fitted(self, "ruleset_")
        results = [simplify(t, self.ruleset_, self.options_) for t in check_trees(X)]
        if self.output == "results":
            return results
        if self.output == "trees":
            return [r.trees for r in results]
        return [r.sentences for r in results]


class NounPhraseReducer(TransformerMixin, BaseEstimator):
    """Reduce every base NP to its determinative and head noun."""

    def fit(self, X=None, y=None):
        if X is not None:
            check_trees(X)
        self.fitted_ = True
        return self

    def transform(self, X) -> list[Tree]:
        check_is_fitted(self, "fitted_")
        return [strip_premodifiers(t)[0] for t in check_trees(X)]
