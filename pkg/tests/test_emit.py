import re

import pytest

from bes.dag import build_expanded, build_pruned, dag_stats, with_top_leaves
from bes.emit import (
    TreeSizeLimitError,
    to_dot,
    to_let_text,
    to_sexpr,
)
from bes.gen import FamilySpec, gen_family, gen_random_monotone
from bes.text import parse_system

GENERIC3 = "f = f | g | h; g = f & g & h; h = (f | g) & h;"


class TestLetText:
    def test_bottom_only_roots(self):
        s = parse_system("x = x; y = y;")
        assert to_let_text(build_expanded(s, 0), s) == "(bot, bot)\n"

    def test_expanded_generic_n3_matches_level_layout(self):
        # one binder per (level, equation), levels in order, tuple of the
        # last level's binders at the end
        s = parse_system(GENERIC3)
        assert to_let_text(build_expanded(s, 3), s) == (
            "let t0 = f(bot, bot, bot) in\n"
            "let t1 = g(bot, bot, bot) in\n"
            "let t2 = h(bot, bot, bot) in\n"
            "let t3 = f(t0, t1, t2) in\n"
            "let t4 = g(t0, t1, t2) in\n"
            "let t5 = h(t0, t1, t2) in\n"
            "let t6 = f(t3, t4, t5) in\n"
            "let t7 = g(t3, t4, t5) in\n"
            "let t8 = h(t3, t4, t5) in\n"
            "(t6, t7, t8)\n"
        )

    def test_chain_pruned_bindings(self):
        s = gen_family(FamilySpec("chain", 2))
        assert to_let_text(build_pruned(s), s) == (
            "let t0 = f2(bot, bot) in\n"
            "let t1 = f1(bot, t0) in\n"
            "let t2 = f1(bot, bot) in\n"
            "let t3 = f2(t2, bot) in\n"
            "(t1, t3)\n"
        )

    def test_binding_count_equals_apply_count(self):
        for seed in range(30):
            s = gen_random_monotone(seed % 5 + 1, 0, 4, seed)
            dag = build_pruned(s)
            text = to_let_text(dag, s)
            assert text.count("let ") == dag_stats(dag).apply_count

    def test_top_prints_as_top(self):
        s = parse_system("x = x;")
        dag = with_top_leaves(build_pruned(s))
        assert to_let_text(dag, s) == "let t0 = x(top) in\n(t0)\n"


class TestSexpr:
    def test_single_root(self):
        s = parse_system("x = x;")
        assert to_sexpr(build_pruned(s), s) == "(x bot)\n"

    def test_n2_generic_golden(self):
        s = parse_system("f = f | g; g = f & g;")
        assert to_sexpr(build_pruned(s), s) == "((f bot (g bot bot)) (g (f bot bot) bot))\n"

    def test_size_refusal_carries_tree_size(self):
        s = gen_family(FamilySpec("complete", 10))
        dag = build_pruned(s)
        with pytest.raises(TreeSizeLimitError) as err:
            to_sexpr(dag, s)
        assert err.value.tree_size == dag_stats(dag).tree_size
        assert err.value.tree_size > 10**6
        assert str(err.value.tree_size) in str(err.value)

    def test_limit_is_adjustable(self):
        s = parse_system("f = f | g; g = f & g;")
        dag = build_pruned(s)
        with pytest.raises(TreeSizeLimitError):
            to_sexpr(dag, s, max_tree_size=3)
        assert to_sexpr(dag, s, max_tree_size=100)


DOT_NODE = re.compile(r'^  n(\d+) \[label="\w+"\];$')
DOT_EDGE = re.compile(r'^  n(\d+) -> n(\d+) \[label="\w+"\];$')


def check_dot(text):
    """Structural check of the emitted graph description."""
    lines = text.strip().splitlines()
    assert lines[0] == "digraph bes {"
    assert lines[-1] == "}"
    nodes, edges = set(), []
    for line in lines[1:-1]:
        m = DOT_NODE.match(line)
        if m:
            nodes.add(int(m.group(1)))
            continue
        m = DOT_EDGE.match(line)
        assert m, f"unparsable line: {line!r}"
        edges.append((int(m.group(1)), int(m.group(2))))
    for a, b in edges:
        assert a in nodes and b in nodes
    return nodes, edges


class TestDot:
    def test_bottom_only(self):
        s = parse_system("x = x;")
        nodes, edges = check_dot(to_dot(build_expanded(s, 0), s))
        assert len(nodes) == 1 and not edges

    def test_n2_pruned_counts(self):
        s = parse_system("f = f | g; g = f & g;")
        nodes, edges = check_dot(to_dot(build_pruned(s), s))
        assert len(nodes) == 5  # 4 applications and one shared bottom
        assert len(edges) == 8

    def test_deterministic(self):
        s = gen_random_monotone(5, 1, 4, 7)
        dag = build_pruned(s)
        assert to_dot(dag, s) == to_dot(dag, s)


class TestEmitterDeterminism:
    def test_identical_input_identical_output(self):
        s = gen_random_monotone(6, 2, 4, 11)
        for build in (build_pruned, lambda q: build_expanded(q)):
            a, b = build(s), build(s)
            assert to_let_text(a, s) == to_let_text(b, s)
            assert to_sexpr(a, s, 10**7) == to_sexpr(b, s, 10**7)
            assert to_dot(a, s) == to_dot(b, s)
