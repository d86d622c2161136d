"""Pairs, mutation, enumeration, G/C matrices, sign coherence."""

import itertools

import pytest

from tautilt import linalg
from tautilt.modules import (
    direct_sum,
    hom_dim,
    projective,
    simple,
    tau,
    zero_rep,
)
from tautilt.tautilting import (
    TauPair,
    c_matrix,
    complete_almost_pair,
    enumerate_exchange_graph,
    g_matrix,
    is_tau_rigid_pair,
    pair_is_valid,
    pair_to_json_dict,
    remove_summand,
    sign_coherence,
    slot_mutates_down,
)


def as_ints(m):
    return linalg.as_int_matrix(m)


# ----------------------------------------------------------------------
# rigidity
# ----------------------------------------------------------------------

def test_projective_pairs_rigid(corpus):
    for q in corpus.values():
        for i in range(1, q.n + 1):
            assert is_tau_rigid_pair(projective(q, i), zero_rep(q))


def test_rigid_pair_golden(a3_rel):
    m = direct_sum(a3_rel, [projective(a3_rel, 1), projective(a3_rel, 2),
                            simple(a3_rel, 2)])
    assert is_tau_rigid_pair(m, zero_rep(a3_rel))
    bad = direct_sum(a3_rel, [simple(a3_rel, 1), simple(a3_rel, 2)])
    assert not is_tau_rigid_pair(bad, zero_rep(a3_rel))


def test_rigid_pair_requires_projective(a3_rel):
    with pytest.raises(ValueError):
        is_tau_rigid_pair(projective(a3_rel, 1), simple(a3_rel, 1))


def test_pair_validity(a3_rel):
    good = TauPair(a3_rel, (projective(a3_rel, 1),), (3,))
    assert pair_is_valid(good)
    doubled = TauPair(a3_rel, (simple(a3_rel, 1), simple(a3_rel, 1)), ())
    assert not pair_is_valid(doubled)
    # Hom(P(2), P(1)) != 0 because P(1) is supported at vertex 2
    clash = TauPair(a3_rel, (projective(a3_rel, 1),), (2,))
    assert not pair_is_valid(clash)


# ----------------------------------------------------------------------
# slots and almost pairs
# ----------------------------------------------------------------------

def test_remove_summand(a3_rel, a3_rel_graph):
    start = a3_rel_graph.nodes[0]
    assert [rep.dims for rep in start.m_parts] == [(1, 1, 0), (0, 1, 1), (0, 0, 1)]
    almost = remove_summand(start, 2)
    assert [rep.dims for rep in almost.m_parts] == [(1, 1, 0), (0, 1, 1)]
    assert almost.is_almost_tilting()
    with pytest.raises(ValueError):
        remove_summand(start, 5)


def test_remove_summand_point(point_algebra):
    pair = TauPair(point_algebra, (projective(point_algebra, 1),), ())
    almost = remove_summand(pair, 0)
    assert almost.n_summands == 0


# ----------------------------------------------------------------------
# completions
# ----------------------------------------------------------------------

def test_complete_almost_pair_golden(a3_rel, a3_rel_graph):
    p1, p2 = projective(a3_rel, 1), projective(a3_rel, 2)
    almost = TauPair(a3_rel, (p1, p2), ())
    larger, smaller = complete_almost_pair(almost, graph=a3_rel_graph)
    assert sorted(r.dims for r in larger.m_parts) == [(0, 0, 1), (0, 1, 1), (1, 1, 0)]
    assert sorted(r.dims for r in smaller.m_parts) == [(0, 1, 0), (0, 1, 1), (1, 1, 0)]


def test_complete_almost_pair_support_side(a3_rel, a3_rel_graph):
    p2 = projective(a3_rel, 2)
    almost = TauPair(a3_rel, (p2, simple(a3_rel, 3)), ())
    larger, smaller = complete_almost_pair(almost, graph=a3_rel_graph)
    assert larger.p_parts == ()
    assert smaller.p_parts == (1,)


def test_complete_almost_pair_point(point_algebra):
    almost = TauPair(point_algebra, (), ())
    larger, smaller = complete_almost_pair(almost)
    assert larger.p_parts == () and len(larger.m_parts) == 1
    assert smaller.p_parts == (1,) and smaller.m_parts == ()


def test_complete_requires_almost(a3_rel, a3_rel_graph):
    with pytest.raises(ValueError):
        complete_almost_pair(a3_rel_graph.nodes[0], graph=a3_rel_graph)


# ----------------------------------------------------------------------
# enumeration
# ----------------------------------------------------------------------

def test_enumeration_counts(corpus_graphs):
    expected = {"a3_rel": 12, "loop": 5, "nakayama2": 6, "a2": 5,
                "a3": 14, "point": 2}
    for name, graph in corpus_graphs.items():
        assert graph.complete, name
        assert len(graph.nodes) == expected[name], name
        n = graph.algebra.n
        assert len(graph.edges) == n * len(graph.nodes) // 2, name


def test_a2_count_against_bruteforce_oracle(a2):
    # independent oracle: enumerate pairs directly from the full (known
    # finite) list of indecomposables rather than by mutation
    indecs = [projective(a2, 1), projective(a2, 2), simple(a2, 1)]
    count = 0
    for k in range(0, 3):
        for mods in itertools.combinations(indecs, k):
            for p_parts in itertools.combinations((1, 2), 2 - k):
                ok = True
                for x in mods:
                    for y in mods:
                        if hom_dim(x, tau(y)) != 0:
                            ok = False
                for j in p_parts:
                    for x in mods:
                        if x.dims[j - 1] != 0:
                            ok = False
                if ok:
                    count += 1
    assert count == 5
    assert len(enumerate_exchange_graph(a2).nodes) == 5


def test_enumeration_regular_and_connected(corpus_graphs):
    for graph in corpus_graphs.values():
        n = graph.algebra.n
        for idx in range(len(graph.nodes)):
            assert graph.degree(idx) == n
        # connectivity by union-find over edges
        parent = list(range(len(graph.nodes)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for e in graph.edges:
            parent[find(e.src)] = find(e.dst)
        assert len({find(i) for i in range(len(graph.nodes))}) == 1


def test_every_node_tilting_and_valid(corpus_graphs):
    for graph in corpus_graphs.values():
        for pair in graph.nodes:
            assert pair.is_tilting()
            assert pair_is_valid(pair, require_tilting=True)


def test_edges_differ_in_one_slot(corpus_graphs):
    for graph in corpus_graphs.values():
        registry = graph.registry
        for e in graph.edges:
            src, dst = graph.nodes[e.src], graph.nodes[e.dst]
            src_ids = sorted(registry.id_of(x) for x in src.m_parts)
            dst_ids = sorted(registry.id_of(x) for x in dst.m_parts)
            shared = 0
            pool = list(dst_ids)
            for x in src_ids:
                if x in pool:
                    pool.remove(x)
                    shared += 1
            common_p = len(set(src.p_parts) & set(dst.p_parts))
            assert shared + common_p == graph.algebra.n - 1


def test_mutation_involution(a3_rel_graph):
    # re-completing the almost pair of any edge returns both endpoints
    graph = a3_rel_graph
    for e in graph.edges[:6]:
        src = graph.nodes[e.src]
        almost = remove_summand(src, e.slot)
        larger, smaller = complete_almost_pair(almost, graph=graph)
        assert graph.node_index(larger) == e.src
        assert graph.node_index(smaller) == e.dst


def test_truncation_flag():
    from tautilt import parse_algebra
    kron = parse_algebra("vertices 2\narrow a: 1 -> 2\narrow b: 1 -> 2")
    graph = enumerate_exchange_graph(kron, max_nodes=6, max_dim=30)
    assert not graph.complete
    assert len(graph.nodes) == 6
    graph2 = enumerate_exchange_graph(kron, max_nodes=1000, max_dim=8)
    assert not graph2.complete


def test_limits_validated(a2):
    with pytest.raises(ValueError):
        enumerate_exchange_graph(a2, max_nodes=0)


def test_disconnected_quiver():
    from tautilt import parse_algebra
    q = parse_algebra("vertices 2")  # k x k: a square exchange graph
    graph = enumerate_exchange_graph(q)
    assert graph.complete
    assert len(graph.nodes) == 4 and len(graph.edges) == 4


# ----------------------------------------------------------------------
# G and C matrices
# ----------------------------------------------------------------------

def test_g_matrix_golden(a3_rel_graph):
    nodes = a3_rel_graph.nodes
    assert as_ints(g_matrix(nodes[0])) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    by_desc = {n.descriptor(): n for n in nodes}
    row2 = by_desc["((1,1,0) (0,1,1) (0,1,0) | 0)"]
    assert as_ints(g_matrix(row2)) == [[1, 0, 0], [0, 1, 1], [0, 0, -1]]
    last = by_desc["(0 | P1 P2 P3)"]
    assert as_ints(g_matrix(last)) == [[-1, 0, 0], [0, -1, 0], [0, 0, -1]]


def test_c_matrix_golden(a3_rel_graph):
    by_desc = {n.descriptor(): n for n in a3_rel_graph.nodes}
    row2 = by_desc["((1,1,0) (0,1,1) (0,1,0) | 0)"]
    assert as_ints(c_matrix(row2)) == [[1, 0, 0], [0, 1, 0], [0, 1, -1]]
    row4 = by_desc["((0,1,1) (0,0,1) | P1)"]
    assert as_ints(c_matrix(row4)) == [[0, 0, -1], [1, 0, 0], [0, 1, 0]]
    assert as_ints(c_matrix(by_desc["(0 | P1 P2 P3)"])) == \
        [[-1, 0, 0], [0, -1, 0], [0, 0, -1]]


def test_g_matrix_unimodular(corpus_graphs):
    for graph in corpus_graphs.values():
        for pair in graph.nodes:
            g = g_matrix(pair)
            assert linalg.det(g) in (1, -1)
            c = c_matrix(pair)
            prod = c.T @ g
            assert linalg.equal(prod, linalg.eye(graph.algebra.n))


def test_g_matrix_requires_tilting(a3_rel):
    with pytest.raises(ValueError):
        g_matrix(TauPair(a3_rel, (projective(a3_rel, 1),), ()))


def test_sign_coherence_classification():
    ident = linalg.eye(2)
    assert sign_coherence(ident) == ["positive", "positive"]
    neg = linalg.mat([[-1, 0], [0, -1]])
    assert sign_coherence(neg) == ["negative", "negative"]
    mixed = linalg.mat([[1, 0], [-1, 1]])
    assert sign_coherence(mixed) == ["mixed", "positive"]


def test_sign_coherence_corpus(corpus_graphs):
    for graph in corpus_graphs.values():
        for pair in graph.nodes:
            assert "mixed" not in sign_coherence(c_matrix(pair))


def test_positive_negative_c_vector_symmetry(corpus_graphs):
    # every positive c-vector appears negated as a negative one, and back
    for graph in corpus_graphs.values():
        n = graph.algebra.n
        pos, neg = set(), set()
        for pair in graph.nodes:
            c = c_matrix(pair)
            for j in range(n):
                col = tuple(int(c[i, j]) for i in range(n))
                if all(x >= 0 for x in col):
                    pos.add(col)
                else:
                    neg.add(col)
        assert pos == {tuple(-x for x in v) for v in neg}


def test_edge_labels_are_positive_columns(corpus_graphs):
    for graph in corpus_graphs.values():
        for e in graph.edges:
            assert all(x >= 0 for x in e.c_vector)
            c = c_matrix(graph.nodes[e.src])
            col = tuple(int(c[i, e.slot]) for i in range(graph.algebra.n))
            assert col == e.c_vector


def test_slot_direction_matches_c_sign(corpus_graphs):
    # a slot mutates down exactly when its c-vector column is positive
    for graph in corpus_graphs.values():
        n = graph.algebra.n
        for pair in graph.nodes:
            c = c_matrix(pair)
            for r in range(n):
                col = [int(c[i, r]) for i in range(n)]
                assert slot_mutates_down(pair, r) == all(x >= 0 for x in col)


def test_pair_json_shape(a3_rel_graph):
    d = pair_to_json_dict(a3_rel_graph.nodes[0])
    assert set(d) == {"m_parts", "p_parts", "g_matrix", "c_matrix"}
    assert d["g_matrix"] == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
