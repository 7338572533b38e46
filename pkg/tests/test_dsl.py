import pytest

from sentsimp.dsl import (
    DslSemanticError,
    DslSyntaxError,
    check_rules,
    default_rules_text,
    default_ruleset,
    load_ruleset,
)
from sentsimp.rules import Gap, Lit, Var

PP_RULE = """
rule np_pp  mode=optional  tags=(postmod x)
  match NP [ $np:NP $pp:PP ]
  keep  [ $np ]
  del   { $pp }
"""


def _rule(body: str, header: str = "rule r mode=optional") -> str:
    return header + "\n" + body


def test_shipped_set_has_twelve_valid_rules():
    rs = default_ruleset()
    assert len(rs) == 12
    assert all(rep.ok for rep in check_rules(default_rules_text()))
    assert {r.name for r in rs if r.mode == "necessary"} == {"abbreviation", "section_indicator"}


def test_parse_simple_rule():
    rule = load_ruleset(PP_RULE)["np_pp"]
    assert rule.mode == "optional"
    assert rule.tags == {"postmod", "x"}
    assert rule.parent_tags == ("NP",)
    assert rule.pattern == (Var("$np", "NP"), Var("$pp", "PP"))
    assert rule.keep == (rule.keep[0],) and rule.delete


def test_pattern_elements():
    text = _rule("  match VP|PP [ $a:@ , CC $b:@ ... ]\n  keep [ $a ... ]\n  del { $b }\n")
    rule = load_ruleset(text)["r"]
    assert rule.parent_tags == ("VP", "PP")
    assert isinstance(rule.pattern[1], Lit) and isinstance(rule.pattern[-1], Gap)


def test_where_expression_and_default_mode():
    text = _rule(
        "  match NP [ $np:NP $x:SBAR ]\n"
        "  where not (contains($x, WHNP) or has_child($x, S)) and first_pos($x) in {IN DT}\n"
        "  keep [ $np ]\n  del { $x }\n",
        header="rule r",
    )
    rule = load_ruleset(text)["r"]
    assert rule.mode == "optional"
    assert len(rule.conditions) == 1


@pytest.mark.parametrize("text, needle", [
    (_rule("  match NP [ $a:NP $b:PP ]\n  keep [ $a $c ]\n  del { $b }\n"), "unbound variable $c"),
    (_rule("  match NP [ $a:NP $b:PP ]\n  keep [ $a ]\n"), "neither kept, spawned nor deleted"),
    (_rule("  match NP [ $a:NP $b:PP ]\n  keep [ $a $b ]\n  del { $b }\n"), "both kept and deleted"),
    (_rule("  match NP [ $a:NP $b:PP ]\n  keep [ $a $b ]\n"), "cannot shrink"),
    (_rule("  match NP [ $a:NP ... $b:PP ]\n  keep [ $a ]\n  del { $b }\n"), "'...'"),
    (_rule("  keep [ $a ]\n"), "missing match"),
    ("rule r mode=sometimes\n  match NP [ $a:NP $b:PP ]\n  keep [ $a ]\n  del { $b }\n", "mode"),
    (PP_RULE + PP_RULE, "duplicate rule name"),
    ("# only comments\n", "at least one rule"),
])
def test_semantic_errors(text, needle):
    with pytest.raises(DslSemanticError) as err:
        load_ruleset(text)
    assert any(needle in p for p in err.value.problems)


@pytest.mark.parametrize("text, line", [
    ("rule r mode=optional\n  mtch NP [ $a:NP ]\n", 2),
    (_rule("  match NP [ $a:NP $b:PP ]\n  where contains($a NP\n  keep [ $a ]\n  del { $b }\n"), 3),
    ("keep [ $a ]\n", 1),
])
def test_syntax_errors_carry_line(text, line):
    with pytest.raises(DslSyntaxError) as err:
        load_ruleset(text)
    assert err.value.line == line


def test_check_rules_reports_each_rule():
    text = PP_RULE + _rule("  match NP [ $a:NP $b:PP ]\n  keep [ $a ]\n")
    reports = check_rules(text)
    assert [r.ok for r in reports] == [True, False]
    assert reports[0].shrinking == "static"


def test_spawn_only_rule_is_guarded():
    text = _rule("  match S [ ... ]\n  where has_child($self, NP)\n  spawn { S: $self }\n")
    (rep,) = check_rules(text)
    assert rep.ok and rep.shrinking == "guarded"
