"""Brute-force reference implementation used to cross-check the engine.

Deliberately naive: addresses are enumerated recursively from scratch for
every tree, membership is keyed on the serialized string, and the closure
is recomputed breadth-first until a round adds nothing.
"""
from sentsimp.rules import apply_rule, match_rule
from sentsimp.tree import Tree, node_at, serialize


def addresses(tree, prefix=()):
    yield prefix
    for i, child in enumerate(tree.children):
        if isinstance(child, Tree):
            yield from addresses(child, prefix + (i,))


def _visit(tree, addr, rules, extras):
    done = set()
    changed = True
    while changed:
        changed = False
        for rule in rules:
            if rule.name in done:
                continue
            m = match_rule(rule, tree, addr)
            if m is None:
                continue
            out = apply_rule(rule, tree, addr, m)
            extras.extend(out.revised[1:] + out.spawned)
            if out.revised:
                tree = out.revised[0]
                done = set()
                changed = True
                break
            done.add(rule.name)
    node = node_at(tree, addr)
    for i, child in enumerate(node.children):
        if isinstance(child, Tree):
            tree = _visit(tree, addr + (i,), rules, extras)
    return tree


def oracle_bases(tree, ruleset):
    rules = [r for r in ruleset if r.mode == "necessary"]
    seen = {serialize(tree)}
    pending = [tree]
    bases = {}
    while pending:
        extras = []
        base = _visit(pending.pop(0), (), rules, extras)
        bases.setdefault(serialize(base), base)
        for t in extras:
            if serialize(t) not in seen:
                seen.add(serialize(t))
                pending.append(t)
    return bases


def oracle_closure(tree, ruleset, np_stripper=None):
    """Serialized forms of every tree reachable from the bases."""
    if np_stripper is not None:
        tree = np_stripper(tree)
    found = oracle_bases(tree, ruleset)
    rules = [r for r in ruleset if r.mode == "optional"]
    frontier = list(found.values())
    while frontier:
        fresh = []
        for t in frontier:
            for addr in addresses(t):
                for rule in rules:
                    m = match_rule(rule, t, addr)
                    if m is None:
                        continue
                    for new in apply_rule(rule, t, addr, m).trees:
                        key = serialize(new)
                        if key not in found:
                            found[key] = new
                            fresh.append(new)
        frontier = fresh
    return set(found)
