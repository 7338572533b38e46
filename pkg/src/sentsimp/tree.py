"""Penn Treebank trees: reading, writing, traversal and rendering.

Trees are immutable.  An internal node is a :class:`Tree`; a leaf is a plain
``str`` holding the surface token (already unescaped, so ``-LRB-`` is stored
as ``(``).
"""
from __future__ import annotations

import re
from typing import Callable, Iterable, Iterator

__all__ = [
    "MalformedTree",
    "Tree",
    "parse_ptb",
    "serialize",
    "yield_tokens",
    "detokenize",
    "find_nodes",
    "node_at",
    "replace_at",
    "iter_nodes",
    "cell_address",
    "split_label",
    "read_trees",
    "SCAFFOLD_SUFFIX",
]

# Inserted preterminals carry this function tag so they can be told apart
# from words of the source sentence.
SCAFFOLD_SUFFIX = "-SCAFFOLD"

CLAUSE_TAGS = frozenset({"S", "SBAR", "SBARQ", "SINV", "SQ"})
PARTICIPLE_TAGS = frozenset({"VBG", "VBN"})
NOMINAL_HEAD_TAGS = frozenset({"NN", "NNS", "NNP", "NNPS"})
DETERMINATIVE_TAGS = frozenset({"DT", "CD", "PDT"})
BRACKET_TAGS = frozenset({"-LRB-", "-RRB-", "-LSB-", "-RSB-", "-LCB-", "-RCB-"})

_ESCAPES = {
    "-LRB-": "(", "-RRB-": ")",
    "-LSB-": "[", "-RSB-": "]",
    "-LCB-": "{", "-RCB-": "}",
}
_UNESCAPES = {v: k for k, v in _ESCAPES.items()}

_LABEL_RE = re.compile(r"([^-=]+)([-=].*)?$")
_TOKEN_RE = re.compile(r"\(|\)|[^\s()]+")


class MalformedTree(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


def split_label(label: str) -> tuple[str, str]:
    """Split ``NP-SBJ=2`` into ``("NP", "-SBJ=2")``.

    Labels that are themselves dash-delimited (``-LRB-``, ``-NONE-``) are
    returned whole.
    """
    if label.startswith("-"):
        end = label.find("-", 1)
        if end > 0:
            return label[: end + 1], label[end + 1:]
        return label, ""
    m = _LABEL_RE.match(label)
    if m is None:
        return label, ""
    return m.group(1), m.group(2) or ""


class Tree:
    """An internal node: a label over a non-empty tuple of children.

    Hashing and equality are structural.  The hash, the tag and the token
    counts are computed once at construction from the children, so building
    a node costs O(number of children).
    """

    __slots__ = ("label", "children", "tag", "n_leaves", "n_tokens", "_hash")

    def __init__(self, label: str, children: Iterable["Tree | str"]):
        children = tuple(children)
        if not label:
            raise ValueError("tree label must be non-empty")
        if not children:
            raise ValueError(f"node {label!r} has no children")
        leaves = 0
        tokens = 0
        for child in children:
            if isinstance(child, Tree):
                leaves += child.n_leaves
                tokens += child.n_tokens
            elif isinstance(child, str):
                if not child or _bad_token(child):
                    raise ValueError(f"invalid leaf token {child!r}")
                leaves += 1
                tokens += 1
            else:
                raise TypeError(f"child of type {type(child).__name__}")
        self.label = label
        self.children = children
        self.tag = split_label(label)[0]
        self.n_leaves = leaves
        # scaffold preterminals do not count as source tokens
        self.n_tokens = 0 if label.endswith(SCAFFOLD_SUFFIX) else tokens
        self._hash = hash((label, children))

    @property
    def function_suffix(self) -> str:
        return split_label(self.label)[1]

    @property
    def is_preterminal(self) -> bool:
        return len(self.children) == 1 and isinstance(self.children[0], str)

    @property
    def is_scaffold(self) -> bool:
        return self.label.endswith(SCAFFOLD_SUFFIX)

    @property
    def is_clause(self) -> bool:
        return self.tag in CLAUSE_TAGS

    @property
    def is_participle(self) -> bool:
        return self.tag in PARTICIPLE_TAGS

    @property
    def is_nominal_head(self) -> bool:
        return self.tag in NOMINAL_HEAD_TAGS

    @property
    def is_determinative(self) -> bool:
        return self.tag in DETERMINATIVE_TAGS

    def subtrees(self) -> Iterator["Tree"]:
        """Internal nodes in depth-first pre-order."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(c for c in reversed(node.children) if isinstance(c, Tree))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Tree):
            return NotImplemented
        return (
            self._hash == other._hash
            and self.label == other.label
            and self.children == other.children
        )

    def __reduce__(self):
        # rebuild through __init__ so cached hashes match the unpickling process
        return (Tree, (self.label, self.children))

    def __repr__(self) -> str:
        return f"Tree({serialize(self)!r})"

    def __str__(self) -> str:
        return serialize(self)


def _bad_token(token: str) -> bool:
    if token in ("(", ")"):
        return False
    return "(" in token or ")" in token or any(ch.isspace() for ch in token)


def parse_ptb(text: str) -> Tree:
    """Parse one bracketed tree.

    An outer unlabeled ``( ... )`` wrapper is stripped, ``-NONE-`` empty
    categories are dropped along with any node left childless, and bracket
    escapes in leaves are decoded.
    """
    tokens = [(m.group(), m.start()) for m in _TOKEN_RE.finditer(text)]
    end = len(text)
    if not tokens:
        raise MalformedTree("empty input", 0)
    if tokens[0][0] != "(":
        raise MalformedTree("tree must start with '('", tokens[0][1])

    # each frame: [label, children, offset, dropped-a-child]
    stack: list[list] = []
    result = None
    i = 0
    n = len(tokens)
    while i < n:
        tok, pos = tokens[i]
        if result is not None:
            raise MalformedTree("trailing text after tree", pos)
        if tok == "(":
            label = ""
            if i + 1 < n and tokens[i + 1][0] not in ("(", ")"):
                label = tokens[i + 1][0]
                i += 1
            stack.append([label, [], pos, False])
        elif tok == ")":
            if not stack:
                raise MalformedTree("unbalanced ')'", pos)
            label, children, start, dropped = stack.pop()
            node = _close(label, children, dropped, start)
            if stack:
                if node is None:
                    stack[-1][3] = True
                else:
                    stack[-1][1].append(node)
            else:
                if node is None:
                    raise MalformedTree("tree has no content", start)
                result = node
        else:
            if not stack:
                raise MalformedTree("token outside brackets", pos)
            stack[-1][1].append(_ESCAPES.get(tok, tok))
        i += 1
    if stack:
        raise MalformedTree("unbalanced '(': unexpected end of input", end)
    if isinstance(result, str):
        raise MalformedTree("tree is a bare token", 0)
    return result


def _close(label: str, children: list, dropped: bool, start: int):
    if split_label(label)[0] == "-NONE-":
        return None
    if not children:
        if label and dropped:
            # every child was an empty category
            return None
        raise MalformedTree("empty node" if not label else f"node {label!r} has no children", start)
    if not label:
        if len(children) == 1:
            return children[0]
        raise MalformedTree("unlabeled node with several children", start)
    try:
        return Tree(label, children)
    except ValueError as exc:
        raise MalformedTree(str(exc), start) from None


# markers on the serializer stack; leaves may themselves be "(" or ")"
_CLOSE, _SPACE = object(), object()


def serialize(tree: Tree | str) -> str:
    """Single-line bracketed form with leaf escapes applied."""
    if isinstance(tree, str):
        return _UNESCAPES.get(tree, tree)
    parts: list[str] = []
    stack: list = [tree]
    while stack:
        item = stack.pop()
        if isinstance(item, Tree):
            parts.append("(" + item.label)
            stack.append(_CLOSE)
            for child in reversed(item.children):
                stack.append(child)
                stack.append(_SPACE)
        elif item is _CLOSE:
            parts.append(")")
        elif item is _SPACE:
            parts.append(" ")
        else:
            parts.append(_UNESCAPES.get(item, item))
    return "".join(parts)


def yield_tokens(tree: Tree) -> list[str]:
    """Leaf tokens from left to right."""
    out: list[str] = []
    stack: list = [tree]
    while stack:
        node = stack.pop()
        if isinstance(node, str):
            out.append(node)
        else:
            stack.extend(reversed(node.children))
    return out


_NO_SPACE_BEFORE = frozenset({",", ".", ";", ":", ")", "%", "]", "}", "?", "!"})
_NO_SPACE_AFTER = frozenset({"(", "[", "{"})
_FINAL_PUNCT = frozenset({".", "?", "!"})


def detokenize(tokens: list[str]) -> str:
    """Render tokens as a sentence.

    Punctuation attaches to its neighbour, the first letter of the first token
    is upper-cased, and a period is appended unless the last token is one of
    ``.?!``.
    """
    if not tokens:
        raise ValueError("cannot render an empty token list")
    first = tokens[0]
    for i, ch in enumerate(first):
        # only the opening token changes case: "5 % of" -> "5% of"
        if ch.isalpha():
            first = first[:i] + ch.upper() + first[i + 1:]
            break
    parts = [first]
    for prev, tok in zip(tokens, tokens[1:]):
        if tok not in _NO_SPACE_BEFORE and prev not in _NO_SPACE_AFTER:
            parts.append(" ")
        parts.append(tok)
    text = "".join(parts)
    if tokens[-1] not in _FINAL_PUNCT:
        text += "."
    return text


Address = tuple


def find_nodes(tree: Tree, predicate: Callable[[Tree], bool]) -> list[Address]:
    """Addresses (child-index paths) of matching nodes, depth-first pre-order."""
    found = []
    stack: list[tuple[Tree, Address]] = [(tree, ())]
    while stack:
        node, addr = stack.pop()
        if predicate(node):
            found.append(addr)
        for i in range(len(node.children) - 1, -1, -1):
            child = node.children[i]
            if isinstance(child, Tree):
                stack.append((child, addr + (i,)))
    return found


def node_at(tree: Tree, address: Address) -> Tree:
    node = tree
    for i in address:
        node = node.children[i]
    if not isinstance(node, Tree):
        raise IndexError(f"address {address} points at a leaf")
    return node


def replace_at(tree: Tree, address: Address, new: Tree) -> Tree:
    """Return a copy of ``tree`` with the node at ``address`` replaced.

    Only the path from the root to ``address`` is rebuilt; everything else is
    shared with the input.
    """
    path = [tree]
    for i in address[:-1]:
        path.append(path[-1].children[i])
    for node, i in zip(reversed(path), reversed(address)):
        kids = node.children
        new = Tree(node.label, kids[:i] + (new,) + kids[i + 1:])
    return new


def iter_nodes(tree: Tree) -> Iterator[tuple[Tree, tuple | None]]:
    """Pre-order walk yielding ``(node, cell)``.

    ``cell`` is a linked path ``(parent_cell, child_index)`` (``None`` for the
    root); :func:`cell_address` turns it into an address.  Cells are cheap to
    create, so the walk costs O(size) regardless of depth.
    """
    yield tree, None
    stack = [(tree, None, 0)]
    while stack:
        node, cell, i = stack.pop()
        kids = node.children
        while i < len(kids) and not isinstance(kids[i], Tree):
            i += 1
        if i >= len(kids):
            continue
        stack.append((node, cell, i + 1))
        child_cell = (cell, i)
        yield kids[i], child_cell
        stack.append((kids[i], child_cell, 0))


def cell_address(cell) -> Address:
    out = []
    while cell is not None:
        cell, i = cell
        out.append(i)
    return tuple(reversed(out))


def read_trees(lines: Iterable[str], input_format: str = "auto") -> Iterator[Tree | MalformedTree]:
    """Read trees from a text stream.

    ``lines`` mode takes one tree per non-blank line; ``blocks`` mode takes
    blank-line separated, possibly multi-line, trees.  ``auto`` picks
    ``lines`` when the first non-blank line starts with ``(`` and is balanced
    on its own.  Unparseable entries are yielded as :class:`MalformedTree`
    instances rather than raised.
    """
    if input_format not in ("auto", "lines", "blocks"):
        raise ValueError(f"unknown input format {input_format!r}")
    it = iter(lines)
    buffered: list[str] = []
    if input_format == "auto":
        input_format = "blocks"
        for line in it:
            buffered.append(line)
            if line.strip():
                s = line.strip()
                if s.startswith("(") and s.count("(") == s.count(")"):
                    input_format = "lines"
                break

    def all_lines():
        yield from buffered
        yield from it

    if input_format == "lines":
        for line in all_lines():
            if line.strip():
                yield _try_parse(line)
        return
    block: list[str] = []
    for line in all_lines():
        if line.strip():
            block.append(line)
        elif block:
            yield _try_parse("".join(block))
            block = []
    if block:
        yield _try_parse("".join(block))


def _try_parse(text: str) -> Tree | MalformedTree:
    try:
        return parse_ptb(text)
    except MalformedTree as exc:
        return exc
