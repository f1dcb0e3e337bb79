import json

import pytest

from castellan.core import CastlingParams, reduce_to_root, residual
from castellan.errors import BudgetExceeded
from castellan.search import SearchBox, search
from castellan.tree import (
    GRASSMANNIAN,
    PROJECTIVE,
    EnumerationConfig,
    annotate_quotients,
    enumerate_tree,
    export,
    from_json,
    to_dot,
)

from conftest import oracle_bfs

P31 = CastlingParams(3, 1)


def tree31(depth, max_entry, **kw):
    return enumerate_tree(EnumerationConfig(P31, depth, max_entry, **kw))


def test_chain_to_depth_six():
    tree = tree31(6, 100)
    for t in [(), (2,), (2, 5), (5, 13), (13, 34), (34, 89)]:
        assert t in tree


def test_figure_nodes_depths():
    tree = tree31(5, 15000)
    depths = {n.tuple: n.depth for n in tree.nodes.values()}
    assert depths[(2, 5, 29)] == 3
    assert depths[(5, 29, 433)] == 4
    assert depths[(2, 29, 169)] == 4
    assert depths[(13, 34, 1325)] == 5
    assert depths[(29, 169, 14701)] == 5
    assert depths[(2, 169, 985)] == 5


def test_entry_bound_is_per_entry():
    tree = tree31(5, 1000)
    assert (2, 169, 985) in tree
    assert (29, 169, 14701) not in tree


def test_root_only():
    tree = tree31(0, 1)
    assert list(tree.nodes) == [()]


def test_alpha_ge_2_root_children():
    tree = enumerate_tree(EnumerationConfig(CastlingParams(7, 2), 1, 10**6))
    assert sorted(tree.nodes) == [(2,), (2, 13), (5,)]


def test_equal_alpha_beta_has_no_self_loop_child():
    tree = enumerate_tree(EnumerationConfig(CastlingParams(4, 2), 1, 100))
    assert sorted(tree.nodes) == [(2,), (2, 7)]


def test_node_invariants():
    tree = tree31(7, 10**6)
    for node in tree.nodes.values():
        assert residual(P31, node.tuple) == 0
        assert node.fiber_dimension == sum(k * k - 1 for k in node.tuple)
        assert len(reduce_to_root(P31, node.tuple).moves) == node.depth
        if node.parent_move is not None:
            assert node.parent_move.after == node.tuple
            top = node.parent[-1] if node.parent else 1
            assert node.tuple[-1] > top


@pytest.mark.parametrize("l, alpha", [(3, 1), (4, 1), (5, 2), (6, 3), (8, 3)])
def test_completeness_against_oracle(l, alpha):
    bound = 5000
    p = CastlingParams(l, alpha)
    tree = enumerate_tree(EnumerationConfig(p, 100, bound))
    assert set(tree.nodes) == oracle_bfs(l, alpha, bound)


def test_completeness_against_box_scan():
    tree = tree31(100, 2000)
    report = search(SearchBox(P31, 12, 1, 2000))
    reachable = {t for t, tag in report.solutions if reduce_to_root(P31, t).reached_root}
    assert set(tree.nodes) == reachable


def test_budget():
    with pytest.raises(BudgetExceeded) as exc:
        enumerate_tree(EnumerationConfig(P31, 20, 10**12), node_budget=10)
    assert len(exc.value.partial) > 10


def label(params, t, removed):
    (lab,) = [q for q in annotate_quotients(params, t) if q.removed == removed]
    return lab


def test_annotate_examples():
    q = label(P31, (2, 5), 2)
    assert (q.remaining, q.kind, q.beta, q.alpha) == ((5,), GRASSMANNIAN, 13, 2)
    q = label(P31, (2, 5), 5)
    assert (q.remaining, q.kind) == ((2,), PROJECTIVE)
    q = label(P31, (13, 34, 1325), 34)
    assert (q.remaining, q.beta, q.alpha) == ((13, 1325), 51641, 34)
    q = label(P31, (2, 29, 169), 2)
    assert (q.remaining, q.beta, q.alpha) == ((29, 169), 14701, 2)
    assert q.text == "GL(14701)⊗GL(2)"


def test_annotate_collapses_duplicates():
    labels = annotate_quotients(CastlingParams(14, 7), (2, 2))
    assert len(labels) == 1


def test_annotations_are_castling_partners():
    tree = tree31(6, 10**7)
    for node in tree.nodes.values():
        for q in node.quotients:
            if q.kind == GRASSMANNIAN:
                assert residual(P31, tuple(sorted(q.remaining + (q.beta,)))) == 0
                assert tuple(sorted(q.remaining + (q.alpha,))) == node.tuple
            else:
                assert residual(P31, q.remaining) == 0


def test_dot_small_tree():
    dot = to_dot(tree31(2, 100))
    assert '"1" [label="1", color=red];' in dot
    assert '"2" [label="2", color=red];' in dot
    assert '"2x5" [label="2x5", color=red];' in dot
    assert '"5 [GL(13)⊗GL(2)]" [label="5 [GL(13)⊗GL(2)]", color=blue];' in dot
    assert '"1" -> "2" [style=solid];' in dot
    assert '"2x5" -> "5 [GL(13)⊗GL(2)]" [style=dashed, color=blue];' in dot


def test_dot_root_only():
    dot = to_dot(tree31(0, 1))
    assert dot.count("color=red") == 1
    assert "->" not in dot


def test_json_schema_and_round_trip():
    tree = tree31(6, 10**20)
    data = json.loads(export(tree, "json"))
    assert data["params"] == {"l": 3, "alpha": 1}
    for n in data["nodes"]:
        assert set(n) == {"tuple", "depth", "fiber_dim", "parent", "quotients"}
        for q in n["quotients"]:
            assert set(q) == {"removed", "remaining", "kind", "beta", "alpha"}
            assert q["kind"] in (PROJECTIVE, GRASSMANNIAN)
    assert from_json(export(tree, "json").decode()) == tree


def test_json_big_integers_as_strings():
    tree = tree31(8, 10**40)
    data = json.loads(export(tree, "json"))
    big = [k for n in data["nodes"] for k in n["tuple"] if isinstance(k, str)]
    assert big and all(int(k) > 2**53 - 1 for k in big)
    small = [k for n in data["nodes"] for k in n["tuple"] if isinstance(k, int)]
    assert all(k <= 2**53 - 1 for k in small)


def test_csv_rows():
    text = export(tree31(2, 100), "csv").decode()
    lines = text.splitlines()
    assert lines[0] == "depth,tuple,fiber_dim,quotients"
    assert lines[3] == "2,2x5,27,2:5:GL(13)⊗GL(2);5:2:projective"


@pytest.mark.parametrize("fmt", ["dot", "json", "csv"])
def test_exports_deterministic(fmt):
    a = export(tree31(6, 10**9), fmt)
    b = export(tree31(6, 10**9), fmt)
    assert a == b


def test_unknown_format():
    with pytest.raises(ValueError):
        export(tree31(1, 10), "svg")
