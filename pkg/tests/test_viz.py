import json
import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import load, typed_source
from finicheck import errors as E
from finicheck.check import parameter_tuples
from finicheck.viz import (AtomNode, ConnectiveNode, EvalTree, InstanceNode,
                           PredCallNode, RootNode, StateNode, TraceGraph, TruncatedNode,
                           build_eval_tree, build_trace, cap_layers, emit_dot, emit_json,
                           read_json, reconstruct)
from finicheck.viz.tree import iter_nodes, layer_size


def dot_nodes(text):
    return re.findall(r"^\s*(\w+) \[label=", text, re.M)


def dot_edges(text):
    return re.findall(r"^\s*\w+ -> \w+", text, re.M)


@pytest.fixture(scope="module")
def forall_tree():
    return build_eval_tree(load("forall_exists.spec"), "forallPexistsQFormula")


def test_forall_exists_tree_shape(forall_tree):
    (inst,) = forall_tree.root.children
    assert isinstance(inst, InstanceNode) and inst.value is True and inst.args == {}
    (forall,) = inst.children
    assert forall.label == "∀" and len(forall.children) == 5
    for x, imp in enumerate(forall.children):
        assert imp.label == "⇒" and imp.bindings == {"x": str(x)}
        if x < 4:
            p, ex = imp.children
            assert p.value is True
            assert ex.label == "∃" and len(ex.children) == 1
            (witness,) = ex.children
            assert isinstance(witness, PredCallNode) and witness.bindings["y"] == str(x + 1)
        else:
            (p,) = imp.children
            assert isinstance(p, PredCallNode) and p.value is False


def test_unpruned_tree_keeps_all_witness_attempts():
    tree = build_eval_tree(load("forall_exists.spec"), "forallPexistsQFormula", prune_tree=False)
    forall = tree.root.children[0].children[0]
    ex = forall.children[2].children[1]
    assert len(ex.children) == 4  # y = 0..3, stops at the first witness


def _formula_tree(formula):
    typed = typed_source(f"theorem t() ⇔ {formula};")
    return build_eval_tree(typed, "t").root.children[0].children[0]


def test_exists_keeps_first_witness():
    node = _formula_tree("∃x:ℤ[0,4]. x = 2")
    assert node.label == "∃" and len(node.children) == 1
    assert node.children[0].bindings == {"x": "2"}


def test_false_conjunction_keeps_first_false_conjunct():
    node = _formula_tree("false ∧ 1 < 2")
    assert node.label == "∧" and len(node.children) == 1
    assert node.children[0].value is False


def test_forall_false_keeps_first_counterexample():
    node = _formula_tree("∀x:ℤ[0,9]. x < 3 ∨ x > 6")
    (cex,) = node.children
    assert cex.bindings == {"x": "3"}


@pytest.mark.parametrize("formula", [
    "true ∧ 1 < 2", "1 > 2 ∨ 2 > 3", "∀x:ℤ[0,3]. x ≥ 0", "∃x:ℤ[0,3]. x > 5"])
def test_dual_cases_keep_all_children(formula):
    node = _formula_tree(formula)
    assert len(node.children) in (2, 4)


def test_dot_node_count_matches_tree(forall_tree):
    text = emit_dot(forall_tree)
    assert text.startswith("digraph tree {")
    count = sum(1 for _ in iter_nodes(forall_tree.root))
    assert len(dot_nodes(text)) == count
    assert len(dot_edges(text)) == count - 1


def test_json_round_trip(forall_tree):
    assert read_json(emit_json(forall_tree)) == forall_tree
    data = json.loads(emit_json(forall_tree))
    assert len(data["root"]["children"][0]["children"][0]["children"]) == 5


def test_trace_two_nodes_dot():
    g = TraceGraph("f(1)")
    g.add(StateNode(1, {"x": "1"}, "var x:T ≔ 1"))
    g.add(StateNode(2, {"x": "2"}, "x ≔ 2"))
    text = emit_dot(g)
    assert len(dot_nodes(text)) == 2 and len(dot_edges(text)) == 1


def test_empty_trace_has_title_node():
    typed = typed_source("type nat = ℕ[3]; proc id(x:nat): nat { return x; }")
    g = build_trace(typed, "id", (2,))
    assert g.states == [] and g.result == "2" and g.title == "id(2)"
    assert dot_nodes(emit_dot(g)) == ["title"]


def test_gcdp_trace_states():
    g = build_trace(load("gcd.spec", N=10), "gcdp", (6, 4))
    # two initializations plus one assignment per loop iteration
    assert [s.number for s in g.states] == [1, 2, 3, 4, 5]
    assert g.states[-1].snapshot == {"m": "6", "n": "4", "a": "2", "b": "0"}
    assert g.result == "2" and g.error is None


def test_bubble_sort_trace():
    typed = load("bubblesort.spec", N=4, M=3)
    op = typed.ops["bubbleSort"]
    second = list(parameter_tuples(typed, op))[1]
    assert second == ((-2, -3, -3, -3),)
    g = build_trace(typed, "bubbleSort", second)
    assert len(g.calls) == 6
    assert all(c.call.startswith("cswap([") for c in g.calls)
    assert g.result == "[-3,-3,-3,-2]"
    numbers = [s.number for s in g.states]
    assert numbers == list(range(1, len(numbers) + 1))
    text = emit_dot(g)
    assert text.count("subgraph cluster_") == 6
    assert read_json(emit_json(g)) == g


def test_failing_trace_records_error():
    typed = typed_source("type nat = ℕ[3]; proc inc(x:nat): nat { var y:nat ≔ x + 1; return y; }")
    g = build_trace(typed, "inc", (3,))
    assert g.error is not None and g.error.startswith("range")


def test_tree_needs_formula():
    with pytest.raises(E.UnsupportedConstruct):
        build_eval_tree(load("gcd.spec", N=3), "gcdp")


def _wide(k):
    return ConnectiveNode("∧", "…", {}, True,
                          [AtomNode(f"a{i}", {}, True) for i in range(k)])


def test_cap_adds_truncation_marker():
    capped = cap_layers(_wide(10), 5)
    assert layer_size(capped) <= 5
    marker = capped.children[-1]
    assert isinstance(marker, TruncatedNode) and marker.omitted == 10 - 3
    data = emit_json(EvalTree(RootNode("t", [InstanceNode(1, {}, True, [capped])]), 5))
    assert '"truncated": true' in data and '"omitted": 7' in data


def test_cap_is_identity_on_small_layers(forall_tree):
    assert cap_layers(forall_tree.root, 500) == forall_tree.root


def test_cap_rejects_tiny_caps():
    with pytest.raises(ValueError):
        cap_layers(_wide(3), 1)


def test_default_cap_on_large_formula():
    typed = typed_source("theorem t() ⇔ ∀x:ℤ[0,999]. x ≥ 0;")
    tree = build_eval_tree(typed, "t")
    assert tree.layer_cap == 500
    assert layer_size(tree.root) <= 500
    assert any(isinstance(x, TruncatedNode) for x in iter_nodes(tree.root))


def _tree_strategy():
    leaf = st.builds(AtomNode, st.text(max_size=3), st.just({}), st.booleans())
    return st.recursive(
        leaf,
        lambda kids: st.builds(ConnectiveNode, st.sampled_from(["∧", "∨"]), st.just(""),
                               st.just({}), st.booleans(), st.lists(kids, max_size=4)),
        max_leaves=40)


@settings(max_examples=200, deadline=None)
@given(_tree_strategy(), st.integers(2, 12))
def test_cap_bounds_layer_size(node, cap):
    capped = cap_layers(node, cap)
    assert layer_size(capped) <= cap
    kept = sum(1 for x in iter_nodes(capped) if not isinstance(x, TruncatedNode))
    omitted = sum(x.omitted for x in iter_nodes(capped) if isinstance(x, TruncatedNode))
    assert kept + omitted == layer_size(node)


@settings(max_examples=200, deadline=None)
@given(_tree_strategy())
def test_json_round_trip_property(node):
    tree = EvalTree(RootNode("t", [InstanceNode(1, {"x": "1"}, True, [node])]), 7, False)
    assert read_json(emit_json(tree)) == tree


def test_reconstruct_after_prune(forall_tree):
    assert reconstruct(forall_tree.root.children[0].children[0]) is True
    typed = typed_source("theorem t(x:ℤ[0,5]) ⇔ x < 3 ⇒ ∃y:ℤ[0,5]. y = x + 2;")
    tree = build_eval_tree(typed, "t")
    for inst in tree.root.children:
        assert reconstruct(inst.children[0]) == inst.value


def test_reconstruct_rejects_truncated_layers():
    with pytest.raises(ValueError):
        reconstruct(cap_layers(_wide(10), 4))
