"""Graph values, codecs, and the combinatorial toolbox.

Independent routes used here: networkx for graph6 codecs and isomorphism,
numpy adjacency powers for closed-walk counts, brute-force orbit
enumeration for isomorphism classes, and elimination orderings for
treewidth.
"""

import itertools
import json
import random

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import wlpower as wl
from wlpower.errors import DomainError, GraphFormatError

# ---------------------------------------------------------------------------
# Helpers and strategies


def to_nx(g: wl.Graph) -> nx.Graph:
    out = nx.Graph()
    out.add_nodes_from(range(g.n))
    out.add_edges_from(g.edge_set)
    return out


def random_graph(rng: random.Random, n: int, p: float = 0.4) -> wl.Graph:
    edges = [e for e in itertools.combinations(range(n), 2) if rng.random() < p]
    return wl.Graph(n, edges)


@st.composite
def graphs(draw, max_n: int = 8):
    n = draw(st.integers(min_value=0, max_value=max_n))
    pairs = list(itertools.combinations(range(n), 2))
    if pairs:
        edges = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs)))
    else:
        edges = []
    return wl.Graph(n, edges)


@st.composite
def graph_with_permutation(draw, max_n: int = 8):
    g = draw(graphs(max_n=max_n))
    perm = draw(st.permutations(list(range(g.n))))
    return g, list(perm)


# ---------------------------------------------------------------------------
# Graph basics and builders


def test_graph_normalizes_edges():
    g = wl.Graph(3, [(2, 0), (0, 2), (1, 2)])
    assert g.edge_set == frozenset({(0, 2), (1, 2)})
    assert g.edge_count == 2
    assert g.neighbors(2) == frozenset({0, 1})
    assert g.degree(0) == 1 and g.degree(1) == 1


def test_graph_rejects_bad_edges():
    with pytest.raises(DomainError):
        wl.Graph(2, [(0, 2)])
    with pytest.raises(DomainError):
        wl.Graph(2, [(0, 0)])
    with pytest.raises(DomainError):
        wl.Graph(-1)


def test_graph_is_immutable():
    g = wl.Graph(2, [(0, 1)])
    with pytest.raises(AttributeError):
        g.n = 5


def test_builders():
    assert wl.empty_graph(3).edge_count == 0
    assert wl.complete_graph(4).edge_count == 6
    assert wl.path_graph(4).edge_set == frozenset({(0, 1), (1, 2), (2, 3)})
    assert wl.cycle_graph(3).edge_set == frozenset({(0, 1), (1, 2), (0, 2)})
    with pytest.raises(DomainError):
        wl.cycle_graph(2)
    star = wl.star_graph(3)
    assert star.n == 4 and star.degree(0) == 3
    both = wl.disjoint_union(wl.complete_graph(2), wl.path_graph(3))
    assert both.n == 5
    assert (0, 1) in both.edge_set and (2, 3) in both.edge_set and (3, 4) in both.edge_set


def test_permuted_relabels():
    g = wl.path_graph(3)
    h = g.permuted([2, 0, 1])  # node 0 -> 2, 1 -> 0, 2 -> 1
    assert h.edge_set == frozenset({(0, 2), (0, 1)})


# ---------------------------------------------------------------------------
# graph6 codec


def test_parse_graph6_hand_decoded():
    assert wl.parse_graph6("?") == wl.empty_graph(0)
    assert wl.parse_graph6("@") == wl.empty_graph(1)
    # 'A_': n=2, body byte '_' = 63+32 -> bits 100000 -> edge (0,1)
    assert wl.parse_graph6("A_") == wl.complete_graph(2)
    assert wl.parse_graph6("A?") == wl.empty_graph(2)
    # 'Bw': n=3, body 'w' = 63+56 -> bits 111000 -> all three pairs
    assert wl.parse_graph6("Bw") == wl.complete_graph(3)
    assert wl.parse_graph6(">>graph6<<A_") == wl.complete_graph(2)


def test_emit_graph6_roundtrip_known():
    for g in (wl.empty_graph(0), wl.complete_graph(3), wl.path_graph(5), wl.cycle_graph(6)):
        assert wl.parse_graph6(wl.emit_graph6(g)) == g


def test_graph6_matches_networkx():
    rng = random.Random(7)
    for _ in range(40):
        g = random_graph(rng, rng.randint(0, 10))
        line = wl.emit_graph6(g)
        via_nx = nx.from_graph6_bytes(line.encode())
        assert set(via_nx.nodes) == set(range(g.n))
        assert {tuple(sorted(e)) for e in via_nx.edges} == set(g.edge_set)
        ours = wl.parse_graph6(nx.to_graph6_bytes(to_nx(g), header=False).decode().strip())
        assert ours == g


def test_parse_graph6_errors():
    with pytest.raises(GraphFormatError):
        wl.parse_graph6("")
    with pytest.raises(GraphFormatError, match="offset"):
        wl.parse_graph6("B")  # truncated body
    with pytest.raises(GraphFormatError):
        wl.parse_graph6("~??")  # long form unsupported
    with pytest.raises(GraphFormatError, match="offset"):
        wl.parse_graph6("A" + chr(30))  # byte below printable range
    with pytest.raises(GraphFormatError):
        wl.parse_graph6("A" + chr(63 + 16))  # nonzero padding bit
    err = None
    try:
        wl.parse_graph6("Bww")
    except GraphFormatError as exc:
        err = exc
    assert err is not None and err.offset is not None


def test_parse_graph_json():
    g = wl.parse_graph_json(json.dumps({"n": 3, "edges": [[0, 1], [1, 2]]}))
    assert g == wl.path_graph(3)
    assert wl.parse_graph_json(json.dumps({"n": 2})) == wl.empty_graph(2)
    with pytest.raises(GraphFormatError):
        wl.parse_graph_json("not json")
    with pytest.raises(GraphFormatError):
        wl.parse_graph_json(json.dumps({"edges": []}))
    with pytest.raises(GraphFormatError):
        wl.parse_graph_json(json.dumps({"n": 2, "edges": [[0, 5]]}))
    assert wl.graph_to_json(g) == {"n": 3, "edges": [[0, 1], [1, 2]]}


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=12))
def test_graph6_roundtrip_property(g):
    assert wl.parse_graph6(wl.emit_graph6(g)) == g


# ---------------------------------------------------------------------------
# Isomorphism types of tuples


def test_atp_examples():
    p3 = wl.path_graph(3)
    assert wl.atp(p3, (0,)) == wl.atp(p3, (2,))
    assert wl.atp(p3, (0,)) == wl.atp(p3, (1,))  # single nodes carry no structure
    assert wl.atp(p3, (0, 1)) == wl.atp(p3, (2, 1))  # both edges
    assert wl.atp(p3, (0, 2)) != wl.atp(p3, (0, 1))  # non-edge vs edge
    assert wl.atp(p3, (0, 0)) != wl.atp(p3, (0, 1))  # equality pattern differs
    assert wl.atp(p3, (0, 0)) == wl.atp(p3, (2, 2))
    k2 = wl.complete_graph(2)
    assert wl.atp(k2, (0, 1)) == wl.atp(k2, (1, 0))
    assert wl.atp(p3, (0, 1)) == wl.atp(k2, (0, 1))  # comparable across graphs
    with pytest.raises(DomainError):
        wl.atp(p3, (0, 3))


@settings(max_examples=40, deadline=None)
@given(graph_with_permutation(max_n=7), st.integers(min_value=1, max_value=3))
def test_atp_permutation_invariant(gp, arity):
    g, perm = gp
    if g.n == 0:
        return
    h = g.permuted(perm)
    rng = random.Random(11)
    for _ in range(10):
        v = tuple(rng.randrange(g.n) for _ in range(arity))
        assert wl.atp(g, v) == wl.atp(h, tuple(perm[x] for x in v))


# ---------------------------------------------------------------------------
# Components and distances


def test_components_avoiding():
    p4 = wl.path_graph(4)
    assert wl.components_avoiding(p4, ()) == [frozenset({0, 1, 2, 3})]
    assert wl.components_avoiding(p4, (1,)) == [frozenset({0}), frozenset({2, 3})]
    assert wl.components_avoiding(p4, (0, 1, 2, 3)) == []
    assert wl.components_avoiding(wl.empty_graph(0), ()) == []
    two = wl.disjoint_union(wl.complete_graph(2), wl.complete_graph(2))
    assert wl.components_avoiding(two, ()) == [frozenset({0, 1}), frozenset({2, 3})]


def test_distance_table():
    p4 = wl.path_graph(4)
    dt = wl.distance_table(p4)
    assert dt.dist(0, 3) == 3 and dt.dist(0, 0) == 0 and dt.dist(1, 2) == 1
    two = wl.disjoint_union(wl.complete_graph(2), wl.complete_graph(2))
    assert wl.distance_table(two).dist(0, 3) == wl.INFINITY
    assert wl.distance_table(two).dist(0, 3) >= 2**30


# ---------------------------------------------------------------------------
# Homomorphism counting


def test_hom_count_identities(c6, two_c3):
    k3 = wl.complete_graph(3)
    assert wl.hom_count(wl.empty_graph(1), c6) == 6
    assert wl.hom_count(wl.complete_graph(2), c6) == 12  # 2 * edge count
    assert wl.hom_count(wl.path_graph(3), k3) == 12
    assert wl.hom_count(k3, c6) == 0
    assert wl.hom_count(k3, two_c3) == 12
    assert wl.hom_count(c6, k3) == 66  # closed 6-walks in K3: 2^6 + 2
    assert wl.hom_count(wl.empty_graph(0), c6) == 1  # the empty map
    assert wl.hom_count(k3, wl.empty_graph(0)) == 0


def test_hom_count_matches_generator():
    rng = random.Random(3)
    for _ in range(25):
        pattern = random_graph(rng, rng.randint(1, 4))
        target = random_graph(rng, rng.randint(0, 4))
        homs = list(wl.homomorphisms(pattern, target))
        assert wl.hom_count(pattern, target) == len(homs)
        assert homs == sorted(homs)
        for img in homs:
            assert all(target.has_edge(img[u], img[v]) for u, v in pattern.edge_set)


def test_trace_oracle_closed_walks():
    rng = random.Random(5)
    for _ in range(30):
        g = random_graph(rng, rng.randint(1, 7))
        a = np.zeros((g.n, g.n), dtype=np.int64)
        for u, v in g.edge_set:
            a[u, v] = a[v, u] = 1
        for k in range(3, 7):
            expected = int(np.trace(np.linalg.matrix_power(a, k)))
            assert wl.hom_count(wl.cycle_graph(k), g) == expected


def test_rooted_hom_count():
    p3, k3 = wl.path_graph(3), wl.complete_graph(3)
    assert wl.rooted_hom_count(p3, {1: 0}, k3) == 4  # middle pinned: 2 * 2
    assert wl.rooted_hom_count(p3, {}, k3) == wl.hom_count(p3, k3)
    # pins must respect pattern edges between pinned nodes
    assert wl.rooted_hom_count(k3, {0: 0, 1: 0}, k3) == 0
    assert wl.rooted_hom_count(k3, {0: 0, 1: 1}, k3) == 1
    with pytest.raises(DomainError):
        wl.rooted_hom_count(p3, {5: 0}, k3)
    with pytest.raises(DomainError):
        wl.rooted_hom_count(p3, {0: 9}, k3)


def test_rooted_sums_telescope():
    rng = random.Random(9)
    for _ in range(15):
        pattern = random_graph(rng, rng.randint(1, 4))
        target = random_graph(rng, rng.randint(1, 5))
        total = wl.hom_count(pattern, target)
        assert total == sum(
            wl.rooted_hom_count(pattern, {0: w}, target) for w in range(target.n)
        )


@settings(max_examples=30, deadline=None)
@given(graph_with_permutation(max_n=5))
def test_hom_count_is_isomorphism_invariant(gp):
    target, perm = gp
    pattern = wl.path_graph(3)
    assert wl.hom_count(pattern, target) == wl.hom_count(pattern, target.permuted(perm))


# ---------------------------------------------------------------------------
# Canonical forms


def test_canonical_form_identifies_iso_classes():
    rng = random.Random(13)
    for _ in range(60):
        g = random_graph(rng, rng.randint(0, 7))
        perm = list(range(g.n))
        rng.shuffle(perm)
        assert wl.canonical_form(g) == wl.canonical_form(g.permuted(perm))
        # the canonical line encodes an isomorphic graph
        rep = wl.parse_graph6(wl.canonical_form(g).decode("ascii"))
        assert nx.is_isomorphic(to_nx(rep), to_nx(g))


def test_canonical_form_separates_non_iso(classes5):
    keys = [wl.canonical_form(g) for g in classes5]
    assert len(set(keys)) == len(keys)
    for a, b in random.Random(1).sample(list(itertools.combinations(range(len(classes5)), 2)), 60):
        assert not nx.is_isomorphic(to_nx(classes5[a]), to_nx(classes5[b]))


def test_canonical_form_budget():
    with pytest.raises(wl.BudgetError):
        wl.canonical_form(wl.empty_graph(17))


# ---------------------------------------------------------------------------
# Enumeration of isomorphism classes


def orbit_class_reps(n: int, connected_only: bool) -> list[wl.Graph]:
    """Brute-force: orbits of labeled edge masks under node permutations."""
    pairs = list(itertools.combinations(range(n), 2))
    index = {p: i for i, p in enumerate(pairs)}
    perms = list(itertools.permutations(range(n)))
    seen = bytearray(1 << len(pairs))
    reps = []
    for mask in range(1 << len(pairs)):
        if seen[mask]:
            continue
        edges = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
        g = wl.Graph(n, edges)
        if connected_only and len(wl.components_avoiding(g, ())) != 1:
            continue
        reps.append(g)
        for perm in perms:
            m2 = 0
            for a, b in edges:
                x, y = perm[a], perm[b]
                m2 |= 1 << index[(x, y) if x < y else (y, x)]
            seen[m2] = 1
    return reps


@pytest.mark.parametrize("n,count", [(1, 1), (2, 1), (3, 2), (4, 6), (5, 21)])
def test_enumeration_matches_orbit_oracle(n, count):
    mine = [g for g in wl.enumerate_connected_graphs(n) if g.n == n]
    oracle = orbit_class_reps(n, connected_only=True)
    assert len(mine) == len(oracle) == count
    assert {wl.canonical_form(g) for g in mine} == {wl.canonical_form(g) for g in oracle}


def test_enumeration_n6_count(classes6):
    by_n = {}
    for g in classes6:
        by_n.setdefault(g.n, []).append(g)
    assert [len(by_n[n]) for n in range(1, 7)] == [1, 1, 2, 6, 21, 112]
    assert len(classes6) == 143
    # representatives are canonically labeled and pairwise distinct
    keys = [wl.canonical_form(g) for g in classes6]
    assert len(set(keys)) == 143
    assert all(wl.emit_graph6(g) == key.decode("ascii") for g, key in zip(classes6, keys))
    assert all(len(wl.components_avoiding(g, ())) == 1 for g in classes6)


def test_enumeration_orbit_oracle_n6():
    assert len(orbit_class_reps(6, connected_only=True)) == 112


def test_enumeration_all_graphs_flag():
    all4 = [g for g in wl.enumerate_connected_graphs(4, connected_only=False) if g.n == 4]
    assert len(all4) == 11
    oracle = orbit_class_reps(4, connected_only=False)
    assert {wl.canonical_form(g) for g in all4} == {wl.canonical_form(g) for g in oracle}


def test_enumeration_budget():
    with pytest.raises(wl.BudgetError):
        list(wl.enumerate_connected_graphs(9))


@pytest.mark.slow
def test_enumeration_n7():
    sevens = [g for g in wl.enumerate_connected_graphs(7, budget_nodes=7) if g.n == 7]
    assert len(sevens) == 853
    keys = {wl.canonical_form(g) for g in sevens}
    assert len(keys) == 853
    rng = random.Random(2)
    idx = list(range(853))
    for a, b in (rng.sample(idx, 2) for _ in range(150)):
        assert not nx.is_isomorphic(to_nx(sevens[a]), to_nx(sevens[b]))


# ---------------------------------------------------------------------------
# Treewidth


def elimination_treewidth(g: wl.Graph) -> int:
    """Brute force over all elimination orderings."""
    if g.n == 0:
        return -1
    best = g.n - 1
    for order in itertools.permutations(range(g.n)):
        adj = {v: set(g.adj[v]) for v in range(g.n)}
        width = 0
        for v in order:
            nb = adj.pop(v)
            width = max(width, len(nb))
            if width >= best:
                break
            for a in nb:
                adj[a] |= nb - {a}
                adj[a].discard(v)
        best = min(best, width)
    return best


def test_treewidth_known_values(c6):
    assert wl.treewidth(wl.empty_graph(0)) == -1
    assert wl.treewidth(wl.empty_graph(1)) == 0
    assert wl.treewidth(wl.complete_graph(2)) == 1
    assert wl.treewidth(wl.path_graph(5)) == 1
    assert wl.treewidth(wl.star_graph(4)) == 1
    assert wl.treewidth(wl.cycle_graph(4)) == 2
    assert wl.treewidth(c6) == 2
    assert wl.treewidth(wl.complete_graph(4)) == 3
    assert wl.treewidth(wl.complete_graph(5)) == 4
    assert wl.treewidth(wl.Graph(5, [(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)])) == 2
    grid = wl.Graph(9, [(r * 3 + c, r * 3 + c + 1) for r in range(3) for c in range(2)]
                    + [(r * 3 + c, r * 3 + c + 3) for r in range(2) for c in range(3)])
    assert wl.treewidth(grid) == 3
    assert wl.treewidth(wl.disjoint_union(wl.complete_graph(4), wl.path_graph(3))) == 3


def test_treewidth_matches_elimination_oracle(classes5):
    for g in classes5:
        assert wl.treewidth(g) == elimination_treewidth(g)


def test_treewidth_oracle_sample_n6(classes6):
    rng = random.Random(17)
    for g in rng.sample([g for g in classes6 if g.n == 6], 12):
        assert wl.treewidth(g) == elimination_treewidth(g)


def test_treewidth_budget():
    with pytest.raises(wl.BudgetError):
        wl.treewidth(wl.empty_graph(13))
