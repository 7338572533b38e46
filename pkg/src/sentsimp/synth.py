"""Seeded generators of synthetic constituency trees.

``random_tree`` draws from a small phrase-structure grammar that exercises
every shipped rule (PP/VP/ADJP postmodifiers, relative clauses,
parentheticals, section headers, coordination, clause adjuncts).
``right_branching_tree`` builds complement-clause chains of an exact token
count for timing runs.
"""
from __future__ import annotations

import random

from .tree import Tree

_WORDS = {
    "DT": ["the", "a", "these"],
    "NN": ["protein", "receptor", "ligand", "kinase", "gene", "factor", "domain", "complex"],
    "NNS": ["cells", "proteins", "mutants", "partners"],
    "NNP": ["MyoD", "GITR", "p21", "IFNalpha", "TRAF2"],
    "JJ": ["novel", "murine", "human", "specific", "active"],
    "VBZ": ["binds", "activates", "induces", "inhibits"],
    "VBD": ["increased", "bound", "reduced"],
    "VBN": ["found", "induced", "expressed"],
    "VBG": ["binding", "activating", "showing"],
    "VB": ["bind", "activate", "regulate"],
    "MD": ["can", "may", "must"],
    "IN": ["of", "in", "with", "for", "by"],
    "CC": ["and", "or"],
    "WDT": ["that", "which"],
    "NNH": ["OBJECTIVE", "RESULTS", "METHODS"],
}


def _pt(rng: random.Random, tag: str) -> Tree:
    word = rng.choice(_WORDS[tag])
    return Tree("NN" if tag == "NNH" else tag, (word,))


class _Grammar:
    def __init__(self, rng: random.Random):
        self.rng = rng

    def pick(self, weights: dict):
        keys = list(weights)
        return self.rng.choices(keys, [weights[k] for k in keys])[0]

    def base_np(self) -> Tree:
        r = self.rng
        shape = r.randrange(4)
        if shape == 0:
            kids = [_pt(r, "DT"), _pt(r, "NN")]
        elif shape == 1:
            kids = [_pt(r, "NNP")]
        elif shape == 2:
            kids = [_pt(r, "DT"), _pt(r, "JJ"), _pt(r, "NN")]
        else:
            kids = [_pt(r, "NN"), _pt(r, "NNS")]
        return Tree("NP", kids)

    def np(self, d: int) -> Tree:
        if d <= 0:
            return self.base_np()
        kind = self.pick({"base": 5, "pp": 3, "vp": 1, "sbar": 1, "prn": 1, "adjp": 1, "coord": 1})
        r = self.rng
        if kind == "base":
            return self.base_np()
        head = self.np(d - 1) if r.random() < 0.3 else self.base_np()
        if kind == "pp":
            return Tree("NP", [head, self.pp(d - 1)])
        if kind == "vp":
            verb = _pt(r, r.choice(["VBN", "VBG"]))
            return Tree("NP", [head, Tree("VP", [verb, self.pp(d - 1)])])
        if kind == "sbar":
            clause = Tree("S", [self.vp(d - 1)])
            return Tree("NP", [head, Tree("SBAR", [Tree("WHNP", [_pt(r, "WDT")]), clause])])
        if kind == "prn":
            inner = Tree("NP", [_pt(r, "NNP")])
            prn = Tree("PRN", [Tree("-LRB-", ["("]), inner, Tree("-RRB-", [")"])])
            return Tree("NP", [head, prn])
        if kind == "adjp":
            return Tree("NP", [head, Tree("ADJP", [_pt(r, "JJ"), self.pp(d - 1)])])
        return Tree("NP", [head, _pt(r, "CC"), self.base_np()])

    def pp(self, d: int) -> Tree:
        if d > 0 and self.rng.random() < 0.15:
            return Tree("PP", [self.pp(d - 1), Tree(",", [","]), _pt(self.rng, "CC"), self.pp(d - 1)])
        return Tree("PP", [_pt(self.rng, "IN"), self.np(d - 1)])

    def vp(self, d: int) -> Tree:
        r = self.rng
        if d <= 0:
            return Tree("VP", [_pt(r, "VBZ"), self.base_np()])
        kind = self.pick({"tr": 4, "md": 2, "coord": 1, "pp": 1, "sbar": 1, "adjunct": 1})
        if kind == "tr":
            return Tree("VP", [_pt(r, "VBZ"), self.np(d - 1)])
        if kind == "md":
            inner = Tree("VP", [_pt(r, "VB"), self.np(d - 1)])
            if r.random() < 0.5:
                adjunct = Tree("S", [Tree("VP", [_pt(r, "VBG"), self.np(d - 1)])])
                return Tree("VP", [_pt(r, "MD"), inner, Tree(",", [","]), adjunct])
            return Tree("VP", [_pt(r, "MD"), inner])
        if kind == "coord":
            left = Tree("VP", [_pt(r, "VBZ"), self.base_np()])
            right = Tree("VP", [_pt(r, "VBZ"), self.base_np()])
            return Tree("VP", [left, Tree(",", [","]), _pt(r, "CC"), right])
        if kind == "pp":
            return Tree("VP", [_pt(r, "VBD"), self.np(d - 1), Tree(",", [","]), self.pp(d - 1)])
        if kind == "sbar":
            clause = Tree("SBAR", [_pt(r, "IN"), self.s(d - 1)])
            return Tree("VP", [_pt(r, "VBD"), self.base_np(), Tree(",", [","]), clause])
        return Tree("VP", [_pt(r, "VBZ"), Tree("ADJP", [_pt(r, "JJ"), self.pp(d - 1)])])

    def s(self, d: int) -> Tree:
        r = self.rng
        if d > 0 and r.random() < 0.15:
            purpose = Tree("S", [Tree("VP", [Tree("TO", ["to"]), Tree("VP", [_pt(r, "VB"), self.base_np()])])])
            return Tree("S", [purpose, Tree(",", [","]), self.np(d - 1), self.vp(d - 1)])
        return Tree("S", [self.np(d - 1), self.vp(d - 1)])

    def sentence(self, d: int) -> Tree:
        r = self.rng
        if r.random() < 0.08:
            body = Tree("S", [Tree("VP", [Tree("TO", ["to"]), Tree("VP", [_pt(r, "VB"), self.np(d - 1)])])])
            return Tree("NP", [Tree("NP", [_pt(r, "NNH")]), Tree(":", [":"]), body, Tree(".", ["."])])
        s = self.s(d)
        if r.random() < 0.7:
            s = Tree("S", list(s.children) + [Tree(".", ["."])])
        return s


def random_tree(rng: random.Random, max_tokens: int = 15, max_depth: int = 4) -> Tree:
    """A random sentence tree with at most ``max_tokens`` leaves."""
    grammar = _Grammar(rng)
    while True:
        tree = grammar.sentence(rng.randint(1, max_depth))
        if tree.n_leaves <= max_tokens:
            return tree


def random_trees(seed: int, count: int, max_tokens: int = 15, max_depth: int = 4) -> list[Tree]:
    rng = random.Random(seed)
    return [random_tree(rng, max_tokens, max_depth) for _ in range(count)]


def right_branching_tree(n_tokens: int, rng: random.Random) -> Tree:
    """``X says that Y thinks that ...`` with exactly ``n_tokens`` leaves."""
    if n_tokens < 2:
        raise ValueError("need at least two tokens")
    levels, extra = divmod(n_tokens - 2, 3)
    tail = [Tree("NP", [_pt(rng, "NNP")]), None]
    obj = []
    if extra == 1:
        obj = [Tree("NP", [_pt(rng, "NNS")])]
    elif extra == 2:
        obj = [Tree("NP", [_pt(rng, "DT"), _pt(rng, "NN")])]
    tree = Tree("S", [tail[0], Tree("VP", [_pt(rng, "VBZ")] + obj)])
    for _ in range(levels):
        sbar = Tree("SBAR", [Tree("IN", ["that"]), tree])
        tree = Tree("S", [Tree("NP", [_pt(rng, "NNP")]), Tree("VP", [_pt(rng, "VBZ"), sbar])])
    return tree


def sample_corpus() -> list[Tree]:
    """The shipped 189-tree sample corpus (golden rows first, then synthetic)."""
    from importlib import resources

    from .tree import parse_ptb

    text = resources.files("sentsimp.data").joinpath("sample_corpus.ptb").read_text(encoding="utf-8")
    return [parse_ptb(line) for line in text.splitlines() if line.strip()]
