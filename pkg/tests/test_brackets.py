from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from slninv.brackets import (
    BracketGraph,
    Edge,
    GraphError,
    InsufficientTrialsError,
    act_assignment,
    contract,
    contract_by_search,
    contraction_oracle,
    disjoint_sign,
    epsilon,
    find_relations,
    plucker_expand,
    random_assignment,
    random_tensor,
    random_unimodular,
    relation_from_poly,
    super_sign,
    umbral_evaluate,
    verify_syzygy,
)
from slninv.cases import U1_KEYS, U2_KEYS, u1_graphs, u2_graphs
from slninv.poly import VarContext, parse_poly


@st.composite
def graphs(draw, max_vertices=3, ns=(2, 3, 4, 5), alt_only=False):
    """Random bracket graph: vertex slots shuffled and cut into edges."""
    n = draw(st.sampled_from(ns))
    nv = draw(st.integers(1, max_vertices))
    vs = [f"v{i}" for i in range(nv)]
    slots = draw(st.permutations([v for v in vs for _ in range(n)]))
    edges = []
    i = 0
    while i < len(slots):
        kind = "alt" if alt_only else draw(st.sampled_from(["alt", "alt", "sym"]))
        cap = min(n, len(slots) - i) if kind == "alt" else min(3, len(slots) - i)
        k = draw(st.integers(1, cap))
        color = draw(st.integers(1, 2))
        edges.append((k, kind, color, slots[i:i + k]))
        i += k
    return BracketGraph.build(n, vs, edges)


def assignment_for(g: BracketGraph, seed: int):
    return random_assignment(g.tensor_keys(), g.n, seed)


@pytest.mark.invariant
@given(graphs(), st.integers(0, 10**6))
def test_contraction_routes_agree(g, seed):
    a = assignment_for(g, seed)
    value = contract(g, a)
    assert value == contract_by_search(g, a)
    if len(g.vertices) * g.n <= 8:
        assert value == contraction_oracle(g, a)


@pytest.mark.invariant
@given(graphs(max_vertices=2), graphs(max_vertices=2), st.integers(0, 10**6))
def test_disjoint_union_multiplies(g1, g2, seed):
    assume(g1.n == g2.n)
    u = g1.disjoint_union(g2)
    a = assignment_for(u, seed)
    assert umbral_evaluate(u, a) == disjoint_sign(g1, g2) * umbral_evaluate(g1, a) * umbral_evaluate(g2, a)


@pytest.mark.invariant
@given(graphs(ns=(2, 3, 4), alt_only=True), st.integers(0, 10**6), st.data())
def test_exchange_relation(g, seed, data):
    assume(len(g.vertices) >= 2)
    x, target = g.vertices[0], g.vertices[1]
    ends = [(i, x) for i, e in enumerate(g.edges) for v in e.ends if v == x]
    size = data.draw(st.integers(1, len(ends)))
    u = data.draw(st.permutations(ends))[:size]
    a = assignment_for(g, seed)
    assert plucker_expand(g, u, target).evaluate(a) == umbral_evaluate(g, a)


@pytest.mark.invariant
@pytest.mark.parametrize("name", ["f122", "f213", "f12311", "f22133"])
def test_u2_generators_are_invariant(name):
    g = u2_graphs()[name]
    for s in range(3):
        a = random_assignment(U2_KEYS, 5, s)
        base = umbral_evaluate(g, a)
        for m in range(3):
            M = random_unimodular(5, 100 + 7 * s + m)
            assert round(np.linalg.det(M.astype(float))) == 1
            assert umbral_evaluate(g, act_assignment(a, M)) == base


@pytest.mark.invariant
@pytest.mark.parametrize("name", sorted(u1_graphs()))
def test_u1_generators_are_invariant(name):
    g = u1_graphs()[name]
    for s in range(3):
        a = random_assignment(U1_KEYS, 5, s)
        base = umbral_evaluate(g, a)
        for m in range(3):
            assert umbral_evaluate(g, act_assignment(a, random_unimodular(5, 50 + 3 * s + m))) == base


def test_two_by_two_determinant():
    g = BracketGraph.build(2, ["v"], [(1, "alt", 1, ["v"]), (1, "alt", 2, ["v"])])
    a = random_assignment(g.tensor_keys(), 2, 4)
    u, v = a[("alt", 1, 1)].entries, a[("alt", 1, 2)].entries
    assert umbral_evaluate(g, a) == u[0] * v[1] - u[1] * v[0]


def test_epsilon_entries():
    e = epsilon(3).entries
    assert e[0, 1, 2] == 1 and e[1, 0, 2] == -1 and e[0, 0, 1] == 0


def test_random_tensor_symmetries():
    assert random_tensor("alt", 2, 4, 1).check_symmetry()
    assert random_tensor("sym", 3, 3, 1).check_symmetry()
    t = random_tensor("alt", 3, 4, 7)
    assert t == random_tensor("alt", 3, 4, 7)
    assert all(-3 <= int(x) <= 3 for x in t.entries.flat)
    with pytest.raises(ValueError):
        random_tensor("alt", 5, 4, 0)


def test_super_sign_of_sorted_bracket():
    g = BracketGraph.build(3, ["v"], [(1, "alt", c, ["v"]) for c in (1, 2, 3)])
    assert super_sign(g) == 1


def test_graph_validation():
    with pytest.raises(GraphError):
        BracketGraph.build(3, ["v"], [(2, "alt", 1, ["v", "v"])])
    with pytest.raises(GraphError):
        Edge(2, "alt", 1, 0, ("v",))


@given(graphs())
def test_json_round_trip(g):
    assert BracketGraph.loads(g.dumps()) == g


def test_zero_relation_vanishes():
    G = u2_graphs()
    ctx = VarContext.of(sorted(G))
    f = parse_poly(ctx, "f122*f133 - f133*f122")
    rep = verify_syzygy(relation_from_poly(f), G, lambda s: random_assignment(U2_KEYS, 5, s))
    assert rep.vanishes and rep.confirmed


def test_non_relation_is_rejected():
    G = u2_graphs()
    ctx = VarContext.of(sorted(G))
    f = parse_poly(ctx, "f122*f133 - f123*f213")
    rep = verify_syzygy(relation_from_poly(f), G, lambda s: random_assignment(U2_KEYS, 5, s))
    assert not rep.confirmed


def test_too_few_trials():
    G = u2_graphs()
    ctx = VarContext.of(sorted(G))
    f = parse_poly(ctx, "f122*f133 - f123*f213")
    with pytest.raises(InsufficientTrialsError):
        verify_syzygy(relation_from_poly(f), G, lambda s: random_assignment(U2_KEYS, 5, s), trials=1)


def test_relation_search_finds_scaled_copy():
    # two copies of one graph satisfy exactly x - y = 0
    g = u2_graphs()["f122"]
    G = {"x": g, "y": g}
    found = find_relations(G, {"x": (1,), "y": (1,)}, (1,), lambda s: random_assignment(U2_KEYS, 5, s))
    assert len(found) == 1
    (rel,) = found
    assert rel[(("x", 1),)] == -rel[(("y", 1),)]
