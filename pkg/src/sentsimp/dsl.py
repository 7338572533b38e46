"""Reader for rule files.

A file is a sequence of rule blocks::

    # comment lines start with '#'
    rule np_pp_postmod  mode=optional tags=(postmod)
      match NP [ $np:NP $pp:PP ]
      keep  [ $np ]
      del   { $pp }

Block lines:

``match TAG[|TAG...] [ elements ]``
    ``$name:TAG`` binds a child, ``$name:@`` binds a child with the same tag
    as the matched node, a bare tag (``,`` ``:`` ``CC`` ...) matches a child
    without binding it, and ``...`` is a gap (first and/or last element only).
``where EXPR``
    Predicates ``contains($v, T)``, ``lacks($v, T)``, ``has_child($v, T)``,
    ``first_pos($v) in {T ...}``, ``self_contains(T)``, ``self_lacks(T)``,
    combined with ``not``/``and``/``or`` and parentheses.  Several ``where``
    lines are conjoined.
``keep [ items ]``
    Children of the rewritten node, in order.  Items are ``$v``,
    ``strip_brackets($v)`` and ``...`` (the next gap's context).  Repeating
    ``keep`` gives alternative rewrites of the same node.
``del { $v ... }``
    Children removed by the preceding ``keep``.
``spawn { [TAG:] items }``
    A new standalone tree (root ``S`` by default).  Besides the ``keep``
    items, ``lit(POS,"word")`` inserts a word and ``subst_whnp($v, $w)``
    copies ``$v`` with its wh-phrase replaced by ``$w``.

``$self`` names the matched node itself.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .rules import (
    SELF,
    AllOf,
    AnyOf,
    Contains,
    FirstLeafPos,
    Gap,
    GapRef,
    HasChild,
    Lit,
    Not,
    Ref,
    Revision,
    RuleSet,
    RuleSpec,
    Scaffold,
    SpawnTemplate,
    StripBrackets,
    SubstituteWhnp,
    Var,
    item_vars,
)

__all__ = [
    "DslSyntaxError",
    "DslSemanticError",
    "load_ruleset",
    "load_ruleset_file",
    "default_ruleset",
    "check_rules",
    "RuleReport",
]


class DslSyntaxError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class DslSemanticError(ValueError):
    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


_HEADER_RE = re.compile(r"rule\s+(\S+)(.*)$")
_OPTION_RE = re.compile(r"(mode)=(\S+)|(tags)=\(([^)]*)\)")
_MATCH_RE = re.compile(r"match\s+(\S+)\s*\[(.*)\]\s*$")
_LIST_RE = re.compile(r"(keep|del|spawn)\s*([\[{])(.*)([\]}])\s*$")
_ITEM_RE = re.compile(r'[A-Za-z_]\w*\((?:"[^"]*"|[^)"])*\)|\S+')
_CALL_RE = re.compile(r"([A-Za-z_]\w*)\((.*)\)$", re.S)
_VAR_RE = re.compile(r"\$\w+$")
_EXPR_TOKEN_RE = re.compile(r"\$\w+|[(){},]|[^\s(){},]+")


@dataclass
class _RawRule:
    name: str
    line: int
    mode: str = "optional"
    tags: frozenset = frozenset()
    parent_tags: tuple = ()
    pattern: tuple = ()
    conditions: list = field(default_factory=list)
    revisions: list = field(default_factory=list)  # [keep_items, del_vars]
    spawn: list = field(default_factory=list)
    has_match: bool = False


def _parse_blocks(text: str) -> list[_RawRule]:
    rules: list[_RawRule] = []
    current: _RawRule | None = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        keyword = line.split(None, 1)[0]
        if keyword == "rule":
            current = _parse_header(line, lineno)
            rules.append(current)
            continue
        if current is None:
            raise DslSyntaxError(lineno, f"{keyword!r} outside a rule block")
        if keyword == "match":
            if current.has_match:
                raise DslSyntaxError(lineno, "a rule has exactly one match line")
            m = _MATCH_RE.match(line)
            if not m:
                raise DslSyntaxError(lineno, "expected: match TAG [ elements ]")
            current.parent_tags = tuple(m.group(1).split("|"))
            current.pattern = _parse_pattern(m.group(2), lineno)
            current.has_match = True
        elif keyword == "where":
            current.conditions.append(_ExprParser(line[len("where"):], lineno).parse())
        elif keyword in ("keep", "del", "spawn"):
            m = _LIST_RE.match(line)
            if not m:
                raise DslSyntaxError(lineno, f"malformed {keyword} line")
            opener, body, closer = m.group(2), m.group(3), m.group(4)
            want = "[" if keyword == "keep" else "{"
            if opener != want or closer != {"[": "]", "{": "}"}[want]:
                raise DslSyntaxError(lineno, f"{keyword} takes {want} ... {'}' if want == '{' else ']'}")
            if keyword == "keep":
                current.revisions.append([_parse_items(body, lineno, keep=True), None, lineno])
            elif keyword == "del":
                if not current.revisions:
                    raise DslSyntaxError(lineno, "del must follow a keep line")
                if current.revisions[-1][1] is not None:
                    raise DslSyntaxError(lineno, "one del line per keep")
                names = body.split()
                for n in names:
                    if not _VAR_RE.match(n):
                        raise DslSyntaxError(lineno, f"del takes variables, got {n!r}")
                current.revisions[-1][1] = tuple(names)
            else:
                current.spawn.append(_parse_spawn(body, lineno))
        else:
            raise DslSyntaxError(lineno, f"unknown keyword {keyword!r}")
    return rules


def _parse_header(line: str, lineno: int) -> _RawRule:
    m = _HEADER_RE.match(line)
    if not m:
        raise DslSyntaxError(lineno, "expected: rule NAME [mode=...] [tags=(...)]")
    rule = _RawRule(m.group(1), lineno)
    rest = m.group(2).strip()
    pos = 0
    for opt in _OPTION_RE.finditer(rest):
        if rest[pos:opt.start()].strip():
            raise DslSyntaxError(lineno, f"unexpected {rest[pos:opt.start()].strip()!r}")
        pos = opt.end()
        if opt.group(1):
            rule.mode = opt.group(2)
        else:
            rule.tags = frozenset(opt.group(4).split())
    if rest[pos:].strip():
        raise DslSyntaxError(lineno, f"unexpected {rest[pos:].strip()!r}")
    return rule


def _parse_pattern(body: str, lineno: int) -> tuple:
    elements = []
    for tok in body.split():
        if tok == "...":
            elements.append(Gap())
        elif tok.startswith("$"):
            name, sep, tag = tok.partition(":")
            if not sep or not tag or not _VAR_RE.match(name):
                raise DslSyntaxError(lineno, f"pattern variable must look like $name:TAG, got {tok!r}")
            elements.append(Var(name, tag))
        else:
            elements.append(Lit(tok))
    if not elements:
        raise DslSyntaxError(lineno, "empty pattern")
    return tuple(elements)


def _parse_items(body: str, lineno: int, keep: bool) -> list:
    items = []
    gap_index = 0
    for tok in _ITEM_RE.findall(body):
        if tok == "...":
            if not keep:
                raise DslSyntaxError(lineno, "'...' is only allowed in keep")
            items.append(GapRef(gap_index))
            gap_index += 1
            continue
        if tok.startswith("$"):
            if not _VAR_RE.match(tok):
                raise DslSyntaxError(lineno, f"bad variable {tok!r}")
            items.append(Ref(tok))
            continue
        call = _CALL_RE.match(tok)
        if not call:
            raise DslSyntaxError(lineno, f"unexpected item {tok!r}")
        fn, args = call.group(1), [a.strip() for a in call.group(2).split(",")]
        if fn == "strip_brackets" and len(args) == 1 and _VAR_RE.match(args[0]):
            items.append(StripBrackets(args[0]))
        elif fn == "subst_whnp" and not keep and len(args) == 2 and all(_VAR_RE.match(a) for a in args):
            items.append(SubstituteWhnp(args[0], args[1]))
        elif fn == "lit" and not keep and len(args) == 2:
            word = args[1]
            if len(word) < 2 or word[0] != '"' or word[-1] != '"' or not word[1:-1]:
                raise DslSyntaxError(lineno, 'lit takes (POS,"word")')
            items.append(Scaffold(args[0], word[1:-1]))
        else:
            raise DslSyntaxError(lineno, f"unknown or misused function {fn!r}")
    return items


def _parse_spawn(body: str, lineno: int) -> SpawnTemplate:
    body = body.strip()
    root = "S"
    head = body.split(None, 1)
    if head and head[0].endswith(":") and not head[0].startswith("$") and len(head[0]) > 1:
        root = head[0][:-1]
        body = head[1] if len(head) > 1 else ""
    items = _parse_items(body, lineno, keep=False)
    if not items:
        raise DslSyntaxError(lineno, "empty spawn")
    return SpawnTemplate(root, tuple(items))


class _ExprParser:
    def __init__(self, text: str, lineno: int):
        self.toks = _EXPR_TOKEN_RE.findall(text)
        self.pos = 0
        self.lineno = lineno

    def error(self, msg: str):
        raise DslSyntaxError(self.lineno, msg)

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            self.error(f"expected {repr(expected) if expected else 'more input'}, got {tok!r}")
        self.pos += 1
        return tok

    def parse(self):
        if not self.toks:
            self.error("empty where clause")
        expr = self.disjunction()
        if self.peek() is not None:
            self.error(f"unexpected {self.peek()!r}")
        return expr

    def disjunction(self):
        terms = [self.conjunction()]
        while self.peek() == "or":
            self.take()
            terms.append(self.conjunction())
        return terms[0] if len(terms) == 1 else AnyOf(tuple(terms))

    def conjunction(self):
        terms = [self.unary()]
        while self.peek() == "and":
            self.take()
            terms.append(self.unary())
        return terms[0] if len(terms) == 1 else AllOf(tuple(terms))

    def unary(self):
        tok = self.peek()
        if tok == "not":
            self.take()
            return Not(self.unary())
        if tok == "(":
            self.take()
            expr = self.disjunction()
            self.take(")")
            return expr
        return self.atom()

    def var(self) -> str:
        tok = self.take()
        if not tok.startswith("$"):
            self.error(f"expected a variable, got {tok!r}")
        return tok

    def atom(self):
        fn = self.take()
        self.take("(")
        if fn in ("contains", "lacks", "has_child"):
            var = self.var()
            self.take(",")
            tag = self.take()
            self.take(")")
            if fn == "has_child":
                return HasChild(var, tag)
            return Contains(var, tag) if fn == "contains" else Not(Contains(var, tag))
        if fn in ("self_contains", "self_lacks"):
            tag = self.take()
            self.take(")")
            cond = Contains(SELF, tag)
            return cond if fn == "self_contains" else Not(cond)
        if fn == "first_pos":
            var = self.var()
            self.take(")")
            self.take("in")
            self.take("{")
            tags = []
            while self.peek() not in ("}", None):
                tags.append(self.take())
            self.take("}")
            if not tags:
                self.error("first_pos needs at least one tag")
            return FirstLeafPos(var, frozenset(tags))
        self.error(f"unknown predicate {fn!r}")


# -- validation ------------------------------------------------------------------

def _validate(raw: _RawRule) -> list[str]:
    where = f"rule {raw.name} (line {raw.line})"
    problems = []
    if raw.mode not in ("necessary", "optional"):
        problems.append(f"{where}: mode must be necessary or optional, not {raw.mode!r}")
    if not raw.has_match:
        problems.append(f"{where}: missing match line")
        return problems
    pattern = raw.pattern
    gap_positions = [i for i, e in enumerate(pattern) if isinstance(e, Gap)]
    if any(0 < i < len(pattern) - 1 for i in gap_positions):
        problems.append(f"{where}: '...' may only open or close a pattern")
    if len(pattern) > 1 and len(gap_positions) == len(pattern):
        problems.append(f"{where}: pattern has no elements besides gaps")
    bound = [e.name for e in pattern if isinstance(e, Var)]
    if len(set(bound)) != len(bound):
        problems.append(f"{where}: a variable is bound twice")
    if SELF in bound:
        problems.append(f"{where}: $self is reserved")
    known = set(bound) | {SELF}

    used = set()
    for cond in raw.conditions:
        used |= cond.variables()
    for items, _, _ in raw.revisions:
        for item in items:
            used |= item_vars(item)
    for template in raw.spawn:
        for item in template.items:
            used |= item_vars(item)
    for _, dels, _ in raw.revisions:
        used |= set(dels or ())
    for name in sorted(used - known):
        problems.append(f"{where}: unbound variable {name}")

    if not raw.revisions and not raw.spawn:
        problems.append(f"{where}: rule neither keeps nor spawns anything")

    spawned = set()
    for template in raw.spawn:
        for item in template.items:
            spawned |= item_vars(item)
    n_gaps = len(gap_positions)
    for k, (items, dels, line) in enumerate(raw.revisions, 1):
        label = f"{where}: keep #{k}"
        dels = set(dels or ())
        kept = set()
        for item in items:
            kept |= item_vars(item)
        gap_refs = sum(isinstance(i, GapRef) for i in items)
        if gap_refs > n_gaps:
            problems.append(f"{label} refers to more gaps than the pattern has")
        if not items:
            problems.append(f"{label} would leave the node empty")
        if kept & dels:
            problems.append(f"{label}: {', '.join(sorted(kept & dels))} both kept and deleted")
        for name in bound:
            if name not in kept and name not in dels and name not in spawned:
                problems.append(f"{label}: matched child {name} is neither kept, spawned nor deleted")
        if SELF in kept:
            problems.append(f"{label}: cannot keep $self inside itself")
        dropped = any(isinstance(e, Lit) for e in pattern) or any(name not in kept for name in bound)
        if not dropped:
            problems.append(f"{label} does not remove anything, so it cannot shrink the tree")
    if not raw.revisions:
        for name in bound:
            if name not in spawned:
                problems.append(f"{where}: matched child {name} is not used by any spawn")
    return problems


def _build(raw: _RawRule) -> RuleSpec:
    return RuleSpec(
        name=raw.name,
        mode=raw.mode,
        tags=raw.tags,
        parent_tags=raw.parent_tags,
        pattern=raw.pattern,
        conditions=tuple(raw.conditions),
        revisions=tuple(Revision(tuple(items), tuple(dels or ())) for items, dels, _ in raw.revisions),
        spawn=tuple(raw.spawn),
    )


@dataclass(frozen=True)
class RuleReport:
    name: str
    mode: str
    tags: frozenset
    problems: tuple
    shrinking: str  # "static" or "guarded"

    @property
    def ok(self) -> bool:
        return not self.problems


def check_rules(text: str) -> list[RuleReport]:
    """Per-rule validation report.  Syntax errors still raise."""
    reports = []
    seen = set()
    for raw in _parse_blocks(text):
        problems = _validate(raw)
        if raw.name in seen:
            problems.append(f"rule {raw.name} (line {raw.line}): duplicate rule name")
        seen.add(raw.name)
        shrinking = "static" if raw.revisions else "guarded"
        reports.append(RuleReport(raw.name, raw.mode, raw.tags, tuple(problems), shrinking))
    return reports


def load_ruleset(text: str, source_path: str = "<string>") -> RuleSet:
    """Parse and validate rule text.

    Raises :class:`DslSyntaxError` on the first malformed line and
    :class:`DslSemanticError` listing every validation problem.
    """
    raws = _parse_blocks(text)
    if not raws:
        raise DslSemanticError("a rule set needs at least one rule")
    problems = []
    seen = set()
    for raw in raws:
        problems.extend(_validate(raw))
        if raw.name in seen:
            problems.append(f"rule {raw.name} (line {raw.line}): duplicate rule name")
        seen.add(raw.name)
    if problems:
        raise DslSemanticError(problems)
    return RuleSet(tuple(_build(r) for r in raws), source_path)


def load_ruleset_file(path) -> RuleSet:
    path = Path(path)
    return load_ruleset(path.read_text(encoding="utf-8"), str(path))


def default_rules_text() -> str:
    return resources.files("sentsimp.data").joinpath("table2.rules").read_text(encoding="utf-8")


def default_ruleset() -> RuleSet:
    """The shipped twelve-rule set."""
    return load_ruleset(default_rules_text(), "table2.rules")
