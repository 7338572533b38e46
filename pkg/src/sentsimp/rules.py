"""Rewrite rules over constituency trees: matching and application.

A rule names the parent tag(s) it fires on, an anchored pattern over the
parent's children, optional side conditions, and what happens to each
matched child: kept in the rewritten tree, moved into a new standalone tree
(spawned), or deleted.  Rules are normally loaded from the text format in
:mod:`sentsimp.dsl`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Union

from .tree import BRACKET_TAGS, SCAFFOLD_SUFFIX, Tree, node_at, replace_at

SELF = "$self"
SAME_TAG = "@"


class EmptyNode(ValueError):
    """A rewrite would leave an internal node without children."""


# -- pattern elements --------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str
    tag: str  # SAME_TAG means "same tag as the matched node"


@dataclass(frozen=True)
class Lit:
    tag: str


@dataclass(frozen=True)
class Gap:
    pass


PatternElement = Union[Var, Lit, Gap]


# -- side conditions ---------------------------------------------------------

@dataclass(frozen=True)
class Contains:
    """Some proper descendant of ``var`` has tag ``tag``."""
    var: str
    tag: str

    def holds(self, env) -> bool:
        node = env[self.var]
        return any(n.tag == self.tag for n in node.subtrees() if n is not node)

    def variables(self):
        return {self.var}


@dataclass(frozen=True)
class HasChild:
    var: str
    tag: str

    def holds(self, env) -> bool:
        return any(isinstance(c, Tree) and c.tag == self.tag for c in env[self.var].children)

    def variables(self):
        return {self.var}


@dataclass(frozen=True)
class FirstLeafPos:
    """The preterminal above the leftmost leaf of ``var`` has a tag in ``tags``."""
    var: str
    tags: frozenset

    def holds(self, env) -> bool:
        node = env[self.var]
        while not node.is_preterminal:
            first = node.children[0]
            if not isinstance(first, Tree):
                return False
            node = first
        return node.tag in self.tags

    def variables(self):
        return {self.var}


@dataclass(frozen=True)
class Not:
    cond: "Condition"

    def holds(self, env) -> bool:
        return not self.cond.holds(env)

    def variables(self):
        return self.cond.variables()


@dataclass(frozen=True)
class AllOf:
    conds: tuple

    def holds(self, env) -> bool:
        return all(c.holds(env) for c in self.conds)

    def variables(self):
        return set().union(*(c.variables() for c in self.conds))


@dataclass(frozen=True)
class AnyOf:
    conds: tuple

    def holds(self, env) -> bool:
        return any(c.holds(env) for c in self.conds)

    def variables(self):
        return set().union(*(c.variables() for c in self.conds))


def Lacks(var: str, tag: str) -> Not:
    return Not(Contains(var, tag))


def SelfContains(tag: str) -> Contains:
    return Contains(SELF, tag)


def SelfLacks(tag: str) -> Not:
    return Not(Contains(SELF, tag))


Condition = Union[Contains, HasChild, FirstLeafPos, Not, AllOf, AnyOf]


# -- actions -----------------------------------------------------------------

@dataclass(frozen=True)
class Ref:
    var: str


@dataclass(frozen=True)
class GapRef:
    """The n-th gap of the pattern, re-inserted as context."""
    index: int


@dataclass(frozen=True)
class Scaffold:
    pos: str
    token: str


@dataclass(frozen=True)
class StripBrackets:
    var: str


@dataclass(frozen=True)
class SubstituteWhnp:
    var: str
    with_var: str


ActionItem = Union[Ref, GapRef, Scaffold, StripBrackets, SubstituteWhnp]


def item_vars(item) -> set[str]:
    if isinstance(item, (Ref, StripBrackets)):
        return {item.var}
    if isinstance(item, SubstituteWhnp):
        return {item.var, item.with_var}
    return set()


@dataclass(frozen=True)
class Revision:
    """One rewritten version of the matched node: what survives and what is dropped."""
    keep: tuple
    delete: tuple = ()


@dataclass(frozen=True)
class SpawnTemplate:
    root_tag: str
    items: tuple


@dataclass(frozen=True)
class RuleSpec:
    name: str
    mode: str
    tags: frozenset
    parent_tags: tuple
    pattern: tuple
    conditions: tuple = ()
    revisions: tuple = ()
    spawn: tuple = ()

    @property
    def necessary(self) -> bool:
        return self.mode == "necessary"

    @property
    def keep(self) -> tuple:
        return self.revisions[0].keep if self.revisions else ()

    @property
    def delete(self) -> tuple:
        return self.revisions[0].delete if self.revisions else ()

    @property
    def bound_vars(self) -> list[str]:
        return [e.name for e in self.pattern if isinstance(e, Var)]

    @property
    def gap_count(self) -> int:
        return sum(isinstance(e, Gap) for e in self.pattern)


@dataclass(frozen=True)
class RuleSet:
    rules: tuple
    source_path: str = "<string>"
    _by_tag: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        index: dict[str, list] = {}
        for rule in self.rules:
            for tag in rule.parent_tags:
                index.setdefault(tag, []).append(rule)
        object.__setattr__(self, "_by_tag", {k: tuple(v) for k, v in index.items()})

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self) -> Iterator[RuleSpec]:
        return iter(self.rules)

    def __getitem__(self, name: str) -> RuleSpec:
        for rule in self.rules:
            if rule.name == name:
                return rule
        raise KeyError(name)

    @property
    def names(self) -> list[str]:
        return [r.name for r in self.rules]

    def for_tag(self, tag: str) -> tuple:
        """Rules whose parent tag is ``tag``, in file order."""
        return self._by_tag.get(tag, ())

    def select(self, tags=None, mode=None) -> "RuleSet":
        rules = [
            r for r in self.rules
            if (tags is None or r.tags & set(tags)) and (mode is None or r.mode == mode)
        ]
        return RuleSet(tuple(rules), self.source_path)


# -- matching ----------------------------------------------------------------

@dataclass(frozen=True)
class Match:
    """Bindings of one rule at one node.

    ``slots`` maps each variable to a child index of the matched node;
    ``gaps`` holds the ``(start, stop)`` child range covered by each gap.
    """
    rule: RuleSpec
    address: tuple
    node: Tree
    slots: dict
    gaps: tuple

    @property
    def bindings(self) -> dict:
        """Variable name to tree address; gaps as tuples of addresses."""
        out = {name: self.address + (i,) for name, i in self.slots.items()}
        for k, (start, stop) in enumerate(self.gaps):
            out[f"...{k}"] = tuple(self.address + (i,) for i in range(start, stop))
        return out

    def env(self) -> dict:
        env = {name: self.node.children[i] for name, i in self.slots.items()}
        env[SELF] = self.node
        return env


def _alignments(pattern: tuple, n: int) -> Iterator[int]:
    """Start offsets of the non-gap core, longest leading gap first."""
    lead = isinstance(pattern[0], Gap)
    trail = len(pattern) > 1 and isinstance(pattern[-1], Gap)
    core = len(pattern) - lead - trail
    if core == 0:
        yield 0
    elif core > n:
        return
    elif lead and trail:
        yield from range(n - core, -1, -1)
    elif lead:
        yield n - core
    elif trail or core == n:
        yield 0


def _element_matches(elem, child, parent_tag: str) -> bool:
    if not isinstance(child, Tree):
        return False
    if isinstance(elem, Var):
        want = parent_tag if elem.tag == SAME_TAG else elem.tag
        return child.tag == want
    return child.tag == elem.tag


def match_node(rule: RuleSpec, node: Tree, address: tuple = ()) -> Match | None:
    if node.tag not in rule.parent_tags:
        return None
    pattern = rule.pattern
    kids = node.children
    n = len(kids)
    core = [e for e in pattern if not isinstance(e, Gap)]
    lead = isinstance(pattern[0], Gap)
    trail = len(pattern) > 1 and isinstance(pattern[-1], Gap)
    for start in _alignments(pattern, n):
        stop = start + len(core)
        if not all(_element_matches(e, kids[start + j], node.tag) for j, e in enumerate(core)):
            continue
        slots = {e.name: start + j for j, e in enumerate(core) if isinstance(e, Var)}
        if not core:
            gaps = [(0, n)]
        else:
            gaps = [(0, start)] if lead else []
            if trail:
                gaps.append((stop, n))
        m = Match(rule, address, node, slots, tuple(gaps))
        if rule.conditions:
            env = m.env()
            if not all(c.holds(env) for c in rule.conditions):
                continue
        if rule.revisions and any(not _revise_children(m, rev) for rev in rule.revisions):
            continue
        return m
    return None


def match_rule(rule: RuleSpec, tree: Tree, address: tuple = ()) -> Match | None:
    """Match ``rule`` at the node found at ``address``; ``None`` when it does not apply."""
    return match_node(rule, node_at(tree, address), tuple(address))


# -- application ---------------------------------------------------------------

@dataclass(frozen=True)
class RewriteOutcome:
    revised: tuple
    spawned: tuple

    @property
    def trees(self) -> tuple:
        return self.revised + self.spawned


def _strip_brackets(node: Tree) -> list:
    return [c for c in node.children if not (isinstance(c, Tree) and c.tag in BRACKET_TAGS)]


def _substitute_whnp(node: Tree, replacement: Tree) -> list:
    kids = list(node.children)
    for i, child in enumerate(kids):
        if isinstance(child, Tree) and child.tag == "WHNP":
            # a clause right after the wh-phrase is flattened into the result
            if i + 1 < len(kids) and isinstance(kids[i + 1], Tree) and kids[i + 1].tag == "S":
                return kids[:i] + [replacement] + list(kids[i + 1].children) + kids[i + 2:]
            return kids[:i] + [replacement] + kids[i + 1:]
    for i, child in enumerate(kids):
        if isinstance(child, Tree) and any(n.tag == "WHNP" for n in child.subtrees()):
            inner = _substitute_whnp(child, replacement)
            return kids[:i] + [Tree(child.label, inner)] + kids[i + 1:]
    return kids


def _expand(item, m: Match) -> list:
    kids = m.node.children
    if isinstance(item, Ref):
        return [m.node if item.var == SELF else kids[m.slots[item.var]]]
    if isinstance(item, GapRef):
        start, stop = m.gaps[item.index]
        return list(kids[start:stop])
    if isinstance(item, Scaffold):
        return [Tree(item.pos + SCAFFOLD_SUFFIX, (item.token,))]
    if isinstance(item, StripBrackets):
        return _strip_brackets(m.node if item.var == SELF else kids[m.slots[item.var]])
    if isinstance(item, SubstituteWhnp):
        target = m.node if item.var == SELF else kids[m.slots[item.var]]
        return _substitute_whnp(target, kids[m.slots[item.with_var]])
    raise TypeError(item)


def _revise_children(m: Match, rev: Revision) -> list:
    out = []
    for item in rev.keep:
        out.extend(_expand(item, m))
    return out


def _spawn(m: Match, template: SpawnTemplate) -> Tree | None:
    items = []
    for item in template.items:
        items.extend(_expand(item, m))
    if not items:
        return None
    if len(items) == 1 and isinstance(items[0], Tree) and items[0].tag == template.root_tag:
        return items[0]
    return Tree(template.root_tag, items)


def apply_rule(rule: RuleSpec, tree: Tree, address: tuple, match: Match) -> RewriteOutcome:
    """Rewrite ``tree`` at ``address`` according to ``match``.

    Each revision yields one revised copy of the whole tree; each spawn
    template yields one standalone tree.  The input is never modified.
    Trees that would not have strictly fewer source tokens than ``tree`` are
    left out, which is what guarantees that repeated rewriting terminates.
    """
    return rewrite(rule, tree, tuple(address), match)


def rewrite(rule: RuleSpec, tree: Tree, address: tuple | None, match: Match) -> RewriteOutcome:
    # ``address`` may be None for rules without revisions
    node = match.node
    limit = tree.n_tokens
    revised = []
    for rev in rule.revisions:
        kids = _revise_children(match, rev)
        if not kids:
            raise EmptyNode(f"rule {rule.name} would empty node {node.label} at {address}")
        if len(kids) == 1 and isinstance(kids[0], Tree) and kids[0].tag == node.tag:
            new_node = kids[0]
        else:
            new_node = Tree(node.label, kids)
        out = replace_at(tree, address, new_node) if address else new_node
        if out.n_tokens < limit:
            revised.append(out)
    spawned = []
    for template in rule.spawn:
        out = _spawn(match, template)
        if out is not None and out.n_tokens < limit:
            spawned.append(out)
    return RewriteOutcome(tuple(revised), tuple(spawned))
