"""Premodifier removal in base noun phrases.

A base NP is an NP whose children are all preterminals.  It is reduced to
its optional leading determinative or numeral plus its head noun, e.g.
"the recently discovered murine glucocorticoid" -> "the glucocorticoid".
"""
from __future__ import annotations

from dataclasses import dataclass

from .tree import DETERMINATIVE_TAGS, NOMINAL_HEAD_TAGS, Tree, find_nodes, node_at, replace_at, yield_tokens

# children that make stripping unsafe: coordination, lists, possessives
_SKIP_TAGS = frozenset({"CC", ",", "POS"})


@dataclass(frozen=True)
class BaseNpEdit:
    address: tuple
    removed_tokens: tuple
    kept_determinative: str | None
    head_noun: str


def is_base_np(node: Tree) -> bool:
    return node.tag == "NP" and all(isinstance(c, Tree) and c.is_preterminal for c in node.children)


def find_base_nps(tree: Tree) -> list[tuple]:
    return find_nodes(tree, is_base_np)


def _reduce(node: Tree):
    kids = node.children
    if any(c.tag in _SKIP_TAGS for c in kids):
        return None
    head = None
    for i in range(len(kids) - 1, -1, -1):
        if kids[i].tag in NOMINAL_HEAD_TAGS:
            head = i
            break
    if head is None:
        return None
    keep = [head]
    if head > 0 and kids[0].tag in DETERMINATIVE_TAGS:
        keep.insert(0, 0)
    if len(keep) == len(kids):
        return None
    return [kids[i] for i in keep], [kids[i] for i in range(len(kids)) if i not in keep]


def strip_premodifiers(tree: Tree) -> tuple[Tree, list[BaseNpEdit]]:
    """Reduce every base NP of ``tree``; returns the new tree and the edits made."""
    edits = []
    revised = tree
    for addr in find_base_nps(tree):
        node = node_at(revised, addr)
        reduced = _reduce(node)
        if reduced is None:
            continue
        kept, removed = reduced
        new_node = Tree(node.label, kept)
        revised = replace_at(revised, addr, new_node) if addr else new_node
        det = kept[0].children[0] if len(kept) == 2 else None
        edits.append(BaseNpEdit(
            address=addr,
            removed_tokens=tuple(tok for c in removed for tok in yield_tokens(c)),
            kept_determinative=det,
            head_noun=kept[-1].children[0],
        ))
    return revised, edits
