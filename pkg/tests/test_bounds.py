from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qbounds.bounds import (
    CSV_COLUMNS,
    bound,
    join_decompositions,
    lower_bounds,
    match_values,
    reports_to_csv,
    reports_to_json,
    table_consistency,
    upper_bounds,
)
from qbounds.catalog import load_catalog
from qbounds.constructions import clique_path_matrix, clique_star_matrix, flipped_cycle_matrix, path_with_spectrum
from qbounds.errors import CountMismatch, DisconnectedGraph
from qbounds.graphs import (
    Graph,
    GraphOp,
    apply_op,
    clique_path,
    complete,
    complete_minus_edge,
    cycle,
    enumerate_connected,
    generalized_bull,
    hypercube,
    join,
    path,
    product,
    vertex_sum,
)
from qbounds.strongprops import Registry, make_record


def values(contribs, direction=None):
    return {c.rule: c.value for c in contribs if direction in (None, c.direction)}


def q_exact(g, registry=None):
    rep = bound(g, registry, allow_disconnected=True)
    assert rep.determined, (g, rep.lo, rep.hi)
    return rep.lo


def with_witness(res) -> Registry:
    reg = Registry()
    reg.register(make_record("w", res.graph, res.matrix, "test"))
    return reg


# -- lower bounds --------------------------------------------------------

def test_lower_bound_examples():
    assert values(lower_bounds(path(6)))["near-path"] == 6
    assert values(lower_bounds(cycle(8)))["zero-forcing"] == 4
    g179 = load_catalog().graph("G179")
    low = lower_bounds(g179, candidates=[[3, 4, 5]])
    ind = [c for c in low if c.rule == "independent-set"]
    assert ind and ind[0].value == 3 and "[1, 2]" in ind[0].detail


def test_lower_bound_details_name_the_certificate():
    low = {c.rule: c for c in lower_bounds(path(5))}
    assert "1-2-3-4-5" in low["unique-shortest-path"].detail
    assert "size 1" in low["zero-forcing"].detail


def test_single_vertex():
    rep = bound(Graph(1))
    assert rep.lo == rep.hi == 1


def test_disconnected_rejected():
    with pytest.raises(DisconnectedGraph):
        lower_bounds(Graph(2))
    with pytest.raises(DisconnectedGraph):
        upper_bounds(Graph(2))
    with pytest.raises(DisconnectedGraph):
        bound(Graph(2))


# -- upper bounds --------------------------------------------------------

def test_upper_bound_examples():
    assert values(upper_bounds(product("cartesian", path(4), path(2))))["hamiltonian"] == 4
    for s in range(2, 8):
        fan = join(Graph(1), path(s))
        assert values(upper_bounds(fan))["hamiltonian"] == -(-(s + 1) // 2)
    assert values(upper_bounds(join(path(5), path(5))))["join-equal"] == 2


def test_fan_witness_gives_rank_bound():
    # a fan P_s v K_1 has a rank s-1 witness: take a singular path matrix T
    # and make the hub row a combination of the rows of T
    s = 5
    fan = join(Graph(1), path(s))
    t = path_with_spectrum(list(range(s)))
    a = np.zeros((s + 1, s + 1))
    a[1:, 1:] = t
    x = np.linspace(1.0, 2.0, s)
    a[0, 1:] = a[1:, 0] = t @ x
    a[0, 0] = x @ t @ x
    reg = Registry()
    reg.register(make_record("fan", fan, a, "test"))
    ups = values(upper_bounds(fan, reg))
    assert ups["min-rank"] == s


def test_unequal_join():
    g = join(path(4), path(2))
    assert values(upper_bounds(g))["join"] == 4


def test_join_decompositions_from_complement():
    splits = join_decompositions(join(path(3), cycle(4)))
    assert ([1, 2, 3], [4, 5, 6, 7]) in splits
    assert join_decompositions(cycle(6)) == []


def test_witness_upper_bound():
    reg = load_catalog().registry
    g96 = load_catalog().graph("G96")
    ups = values(upper_bounds(g96, reg), "upper")
    assert ups["witness"] == 3


# -- bound ---------------------------------------------------------------

def test_bound_examples():
    rep = bound(cycle(6))
    assert (rep.lo, rep.hi) == (3, 3) and rep.determined
    res = clique_star_matrix([3, 3, 4])
    rep = bound(res.graph, with_witness(res))
    assert (rep.lo, rep.hi) == (3, 3)
    assert values(rep.contributions, "lower")["unique-shortest-path"] == 3
    rep = bound(load_catalog().graph("G187"))
    assert (rep.lo, rep.hi) == (2, 3)


def test_report_json_and_csv():
    rep = bound(cycle(5), label="C5")
    data = json.loads(reports_to_json([rep]))
    assert data[0]["graph"] == "C5" and data[0]["lo"] == 3 and data[0]["determined"]
    csv = reports_to_csv([rep]).splitlines()
    assert csv[0].split(",") == list(CSV_COLUMNS)
    assert csv[1].startswith("C5,3,3,true,")


@given(st.integers(2, 6), st.data())
@settings(max_examples=40, deadline=None)
def test_lo_le_hi_everywhere(n, data):
    g = data.draw(st.sampled_from(enumerate_connected(n)))
    rep = bound(g)
    assert 1 <= rep.lo <= rep.hi <= n
    assert rep.lo == max(c.value for c in rep.contributions if c.direction == "lower")
    assert rep.hi == min(c.value for c in rep.contributions if c.direction == "upper")


def test_all_order_six_reports_consistent():
    reg = load_catalog().registry
    for g in enumerate_connected(6):
        rep = bound(g, reg)
        assert 2 <= rep.lo <= rep.hi <= 6


@pytest.mark.parametrize("rid", ["M96", "M174", "flipped-C6", "banner"])
def test_adding_witness_is_monotone(rid):
    rec = load_catalog().registry.get(rid)
    for g in enumerate_connected(rec.graph.n)[::5]:
        before = bound(g, Registry())
        after = bound(g, _single(rec))
        assert after.lo == before.lo
        assert after.hi <= before.hi


def _single(rec):
    reg = Registry()
    reg.register(rec, verify=False)
    return reg


# -- table consistency ---------------------------------------------------

def test_table_consistency_small():
    assert table_consistency(4, {2: 3, 3: 2, 4: 1}).feasible
    assert table_consistency(2, {2: 1}).feasible
    v = table_consistency(6, load_catalog().value_multiset(6), load_catalog().registry)
    assert v.feasible and v.graphs == 112 and v.determined_consistent


def test_table_consistency_count_mismatch():
    with pytest.raises(CountMismatch):
        table_consistency(3, {2: 1})


def test_table_consistency_detects_infeasible_multiset():
    # two graphs of order 3 with q = 2 is impossible: P_3 has q = 3
    v = table_consistency(3, {2: 2})
    assert not v.feasible


def test_match_values():
    reps = [bound(path(3)), bound(complete(3))]
    assert sorted(match_values(reps, {2: 1, 3: 1})) == [2, 3]
    assert match_values(reps, {3: 2}) is None


# -- the graph-operation table ------------------------------------------

def s_graph(k):
    """P_{k+1} + C_4 + P_{k+1} glued at two opposite cycle vertices; the
    cycle is x = k+1, k+2, y = k+3, k+4."""
    return vertex_sum(vertex_sum(path(k + 1), cycle(4), k + 1, 1), path(k + 1), k + 3, 1)


def s_graph_value(k):
    rep = bound(s_graph(k), load_catalog().registry)
    # the exact value k + 2 is a cited result; check it lies in the interval
    assert rep.contains(k + 2)
    return k + 2


@pytest.mark.parametrize("n", [3, 4, 5])
def test_join_lowers(n):
    assert q_exact(join(path(n), path(n))) == 2 < q_exact(path(n))


def test_join_maintains():
    assert q_exact(join(path(2), path(2))) == q_exact(path(2)) == 2


def test_join_raises():
    g = join(hypercube(5), path(2))
    assert values(lower_bounds(g))["independent-set"] == 3
    assert q_exact(path(2)) == 2
    # q(Q_5) = 2 is a cited value; the orthogonal-matrix check is not rebuilt


@pytest.mark.parametrize("s", [2, 3, 4, 5, 6])
def test_cartesian_with_p2_maintains(s):
    assert q_exact(product("cartesian", path(s), path(2))) == q_exact(path(s)) == s


def test_tensor_maintains_for_p2():
    g = product("tensor", cycle(4), path(2))
    assert q_exact(g, load_catalog().registry) == 2


def test_tensor_raises():
    g = product("tensor", complete(3), path(2))
    assert q_exact(g) == 3 > max(q_exact(complete(3)), q_exact(path(2)))


def test_strong_maintains():
    from qbounds.constructions import build

    res = build("strong-p3-p3", [])
    assert q_exact(res.graph, with_witness(res)) == 3 == q_exact(path(3))


@pytest.mark.parametrize("n", [2, 3])
def test_vertex_sum_clique_star(n):
    res = clique_star_matrix([n, n, n])
    assert q_exact(res.graph, with_witness(res)) == 3
    two = clique_path_matrix([n, n])
    assert q_exact(two.graph, with_witness(two)) == 3


def test_vertex_sum_raises():
    res = clique_path_matrix([3, 3])
    assert q_exact(clique_path([3, 3]), with_witness(res)) == 3 > q_exact(complete(3))


@pytest.mark.parametrize("k", [2, 3])
def test_vertex_deletion(k):
    p = path(2 * k + 1)
    assert q_exact(apply_op(p, GraphOp("delete-vertex", vertex=k + 1))) == k < q_exact(p)
    assert q_exact(apply_op(complete(5), GraphOp("delete-vertex", vertex=1))) == 2
    c = cycle(2 * k + 2)
    assert q_exact(apply_op(c, GraphOp("delete-vertex", vertex=1))) == 2 * k + 1 > q_exact(c)


@pytest.mark.parametrize("k", [1, 2])
def test_vertex_deletion_raises_on_s_graph(k):
    g = s_graph(k)
    z = [v for v in g.vertices if g.degree(v) == 2 and all(g.degree(w) == 3 for w in g.neighbors(v))]
    out = apply_op(g, GraphOp("delete-vertex", vertex=z[0]))
    assert q_exact(out) == 2 * k + 3 > s_graph_value(k)


@pytest.mark.parametrize("k", [2, 3])
def test_edge_deletion(k):
    p = path(2 * k)
    assert q_exact(apply_op(p, GraphOp("delete-edge", edge=(k, k + 1)))) == k < q_exact(p)
    assert q_exact(complete_minus_edge(5), load_catalog().registry) == 2
    c = cycle(2 * k + 2)
    assert q_exact(apply_op(c, GraphOp("delete-edge", edge=(1, 2)))) > q_exact(c)


@pytest.mark.parametrize("n", [4, 5])
def test_edge_contraction(n):
    assert q_exact(apply_op(path(n), GraphOp("contract-edge", edge=(1, 2)))) == n - 1
    assert q_exact(apply_op(complete(n), GraphOp("contract-edge", edge=(1, 2)))) == 2


@pytest.mark.parametrize("k", [1, 2])
def test_edge_contraction_raises_on_s_graph(k):
    g = s_graph(k)
    x, z = k + 1, k + 2
    out = apply_op(g, GraphOp("contract-edge", edge=(x, z)))
    assert q_exact(out) == 2 * k + 2 > s_graph_value(k)
    assert q_exact(generalized_bull(k, k)) == 2 * k + 2


@pytest.mark.parametrize("k", [1, 2])
def test_edge_subdivision(k):
    gb = generalized_bull(k, k)
    u, v = [w for w in gb.vertices if gb.degree(w) == 3]
    sub = apply_op(gb, GraphOp("subdivide-edge", edge=(u, v)))
    assert s_graph_value(k) < q_exact(gb)
    c = cycle(2 * k + 1)
    assert q_exact(apply_op(c, GraphOp("subdivide-edge", edge=(1, 2))), _flipped(2 * k + 2)) == q_exact(c)
    # a cycle edge of the S-graph: the new path through the subdivided edge
    g = s_graph(k)
    x, w = k + 1, k + 2
    raised = apply_op(g, GraphOp("subdivide-edge", edge=(x, w)))
    assert values(lower_bounds(raised))["unique-shortest-path"] == 2 * k + 3 > s_graph_value(k)
    assert sub.n == gb.n + 1


def _flipped(s):
    reg = Registry()
    reg.register(make_record("c", cycle(s), flipped_cycle_matrix(s), "test"))
    return reg
