"""Exhaustive sentence simplification over a rule set.

Necessary rules are applied once, in place, during a depth-first pass over
the input.  The resulting base tree(s) seed an ordered set that is then
closed under the optional rules with a FIFO worklist: every node of every
tree in the set is tried against every optional rule, and each rewrite's
products are added if they are not already present.
"""
from __future__ import annotations

import time
from collections import Counter, deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .npsimp import strip_premodifiers
from .rules import RuleSet, apply_rule, match_node, rewrite
from .tree import MalformedTree, Tree, cell_address, detokenize, iter_nodes, node_at, parse_ptb, yield_tokens

__all__ = [
    "EngineOptions",
    "SimplifiedSentence",
    "SimplificationResult",
    "StepBudgetExceeded",
    "GenerationCapReached",
    "necessary_pass",
    "collect_bases",
    "simplify",
    "simplify_batch",
]


class StepBudgetExceeded(RuntimeError):
    pass


class GenerationCapReached(RuntimeError):
    pass


@dataclass(frozen=True)
class EngineOptions:
    np_replace: bool = False
    emit_original: bool = True
    rule_tag_filter: frozenset | None = None
    max_generated: int = 512
    max_steps: int = 10000

    def __post_init__(self):
        if self.max_generated < 1 or self.max_steps < 1:
            raise ValueError("max_generated and max_steps must be positive")
        if self.rule_tag_filter is not None:
            tags = frozenset(self.rule_tag_filter)
            if not tags:
                raise ValueError("rule_tag_filter must be non-empty when given")
            object.__setattr__(self, "rule_tag_filter", tags)


@dataclass(frozen=True)
class SimplifiedSentence:
    tree: Tree
    sentence: str
    provenance: tuple  # ((rule name, address), ...)
    token_count: int
    is_base: bool = False


@dataclass
class SimplificationResult:
    outputs: list = field(default_factory=list)
    truncated: bool = False
    error: str | None = None
    error_kind: str | None = None
    fire_counts: dict = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def sentences(self) -> list[str]:
        return [o.sentence for o in self.outputs]

    @property
    def trees(self) -> list[Tree]:
        return [o.tree for o in self.outputs]

    @property
    def ok(self) -> bool:
        return self.error is None


class _Budget:
    """Counts rule firings; trips when a rule set keeps rewriting forever.

    ``fired`` only tallies firings that produced at least one tree.
    """

    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0
        self.fired = Counter()

    def step(self):
        self.used += 1
        if self.used > self.limit:
            raise StepBudgetExceeded(f"more than {self.limit} rule firings")


def _pass(tree: Tree, rules: RuleSet, provenance: tuple, budget: _Budget):
    """One depth-first necessary pass; returns (tree, provenance, extra trees)."""
    extras = []
    prov = list(provenance)
    stack = [()]
    while stack:
        addr = stack.pop()
        exhausted = set()
        while True:
            node = node_at(tree, addr)
            changed = False
            for rule in rules.for_tag(node.tag):
                if rule.name in exhausted:
                    continue
                m = match_node(rule, node, addr)
                if m is None:
                    continue
                budget.step()
                out = apply_rule(rule, tree, addr, m)
                if out.trees:
                    budget.fired[rule.name] += 1
                step = tuple(prov) + ((rule.name, addr),)
                extras.extend((t, step) for t in out.revised[1:] + out.spawned)
                if out.revised:
                    tree = out.revised[0]
                    prov.append((rule.name, addr))
                    exhausted.clear()
                    changed = True
                    break
                exhausted.add(rule.name)
            if not changed:
                break
        node = node_at(tree, addr)
        for i in range(len(node.children) - 1, -1, -1):
            if isinstance(node.children[i], Tree):
                stack.append(addr + (i,))
    return tree, tuple(prov), extras


def necessary_pass(tree: Tree, rules: RuleSet, max_steps: int = 10000) -> Tree:
    """Apply the necessary rules of ``rules`` once over ``tree``, depth first.

    At each node the rules are retried until none matches there; ancestors
    are never revisited.  Alternative rewrites are discarded here; use
    :func:`collect_bases` to get them too.
    """
    necessary = rules.select(mode="necessary")
    return _pass(tree, necessary, (), _Budget(max_steps))[0]


def collect_bases(tree: Tree, rules: RuleSet, max_steps: int = 10000, _budget=None) -> list[tuple]:
    """All base trees as ``(tree, provenance)`` pairs.

    Alternatives produced by necessary rules (e.g. both readings of an
    abbreviation) get a necessary pass of their own.
    """
    necessary = rules.select(mode="necessary")
    budget = _budget or _Budget(max_steps)
    bases, seen_bases, seen_inputs = [], set(), {tree}
    queue = deque([(tree, ())])
    while queue:
        t, prov = queue.popleft()
        out, out_prov, extras = _pass(t, necessary, prov, budget)
        if out not in seen_bases:
            seen_bases.add(out)
            bases.append((out, out_prov))
        for extra, extra_prov in extras:
            if extra not in seen_inputs:
                seen_inputs.add(extra)
                queue.append((extra, extra_prov))
    return bases


def _render(tree: Tree, provenance: tuple, is_base: bool) -> SimplifiedSentence:
    return SimplifiedSentence(
        tree=tree,
        sentence=detokenize(yield_tokens(tree)),
        provenance=provenance,
        token_count=tree.n_tokens,
        is_base=is_base,
    )


def simplify(tree: Tree, rules: RuleSet, opts: EngineOptions | None = None) -> SimplificationResult:
    """Every simplification of ``tree`` reachable with ``rules``.

    Outputs are deduplicated on tree structure and ordered: base tree(s)
    first, then in order of discovery.  Raises :class:`StepBudgetExceeded`
    if the rule set does not settle within ``opts.max_steps`` firings; when
    ``opts.max_generated`` trees exist the search stops and the result is
    flagged as truncated.
    """
    opts = opts or EngineOptions()
    if opts.rule_tag_filter is not None:
        rules = rules.select(tags=opts.rule_tag_filter)
    if opts.np_replace:
        tree = strip_premodifiers(tree)[0]
    budget = _Budget(opts.max_steps)
    optional = rules.select(mode="optional")

    entries = []  # (tree, provenance, is_base)
    index = set()
    for base, prov in collect_bases(tree, rules, _budget=budget):
        index.add(base)
        entries.append((base, prov, True))

    truncated = False
    pos = 0
    while pos < len(entries) and not truncated:
        source, prov, _ = entries[pos]
        pos += 1
        for node, cell in iter_nodes(source):
            for rule in optional.for_tag(node.tag):
                m = match_node(rule, node)
                if m is None:
                    continue
                budget.step()
                # spawn-only rules never need the address unless a tree is new
                addr = cell_address(cell) if rule.revisions else None
                produced = rewrite(rule, source, addr, m).trees
                if produced:
                    budget.fired[rule.name] += 1
                for new in produced:
                    if new in index:
                        continue
                    if addr is None:
                        addr = cell_address(cell)
                    if len(entries) >= opts.max_generated:
                        truncated = True
                        break
                    index.add(new)
                    entries.append((new, prov + ((rule.name, addr),), False))
                if truncated:
                    break
            if truncated:
                break

    result = SimplificationResult(
        outputs=[_render(t, p, b) for t, p, b in entries if opts.emit_original or not b],
        truncated=truncated,
        fire_counts=dict(sorted(budget.fired.items())),
    )
    if truncated:
        result.error = str(GenerationCapReached(f"stopped at {opts.max_generated} trees"))
        result.error_kind = "GenerationCapReached"
    return result


def _error_result(exc: Exception) -> SimplificationResult:
    return SimplificationResult(error=str(exc), error_kind=type(exc).__name__)


def _simplify_item(args) -> SimplificationResult:
    item, rules, opts = args
    try:
        if isinstance(item, Exception):
            raise item
        if isinstance(item, str):
            item = parse_ptb(item)
        start = time.perf_counter()
        result = simplify(item, rules, opts)
        result.elapsed = time.perf_counter() - start
        return result
    except (MalformedTree, StepBudgetExceeded, ValueError) as exc:
        return _error_result(exc)


def simplify_batch(
    trees: Iterable,
    rules: RuleSet,
    opts: EngineOptions | None = None,
    jobs: int = 1,
) -> Iterator[SimplificationResult]:
    """Simplify a stream of trees, yielding results in input order.

    Items may be trees, bracketed strings, or exceptions standing in for
    unreadable input; failures are reported on the item's result instead of
    stopping the batch.
    """
    opts = opts or EngineOptions()
    work = ((item, rules, opts) for item in trees)
    if jobs <= 1:
        yield from map(_simplify_item, work)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        yield from pool.map(_simplify_item, work, chunksize=4)
