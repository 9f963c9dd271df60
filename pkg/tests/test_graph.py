import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iobound import (
    ComputationGraph,
    CycleDetected,
    DanglingEdge,
    DimensionMismatch,
    InvalidVertexId,
    KindMismatch,
    SelfLoop,
    WeightedGraph,
    ZeroDegreeVertex,
    boundary_cost,
    connected_components,
    degrees,
    hypercube,
    indicator,
    inner_product,
    laplacian,
    normalize_out_degree,
    quadratic_form,
    undirected_support,
    validate_dag,
)

# inner_product(2): a0=0 a1=1 b0=2 b1=3, products 4 and 5, sum 6
DOT2_EDGES = [(0, 4), (2, 4), (1, 5), (3, 5), (4, 6), (5, 6)]


@pytest.fixture
def dot2():
    return inner_product(2)


def _edge_set(g):
    return sorted(map(tuple, g.edges.tolist()))


def test_dot2_structure(dot2):
    assert dot2.n == 7
    assert _edge_set(dot2) == sorted(DOT2_EDGES)
    assert dot2.kinds[:4] == ("input",) * 4
    assert dot2.kinds[6] == "output"


def test_topological_order_dot2(dot2):
    order = validate_dag(dot2)
    pos = {v: i for i, v in enumerate(order)}
    assert sorted(order) == list(range(7))
    for u, v in DOT2_EDGES:
        assert pos[u] < pos[v]
    # inputs, then products, then the sum
    assert set(order[:4]) == {0, 1, 2, 3}
    assert order[-1] == 6


def test_edgeless_order():
    g = ComputationGraph(3)
    assert sorted(validate_dag(g)) == [0, 1, 2]


def test_two_cycle_detected():
    g = ComputationGraph(2, [(0, 1), (1, 0)])
    with pytest.raises(CycleDetected) as info:
        validate_dag(g)
    assert info.value.vertex in (0, 1)


def test_longer_cycle_names_cycle_vertex():
    g = ComputationGraph(5, [(0, 1), (1, 2), (2, 3), (3, 1), (3, 4)])
    with pytest.raises(CycleDetected) as info:
        validate_dag(g)
    assert info.value.vertex in (1, 2, 3)


def test_construction_errors():
    with pytest.raises(DanglingEdge):
        ComputationGraph(2, [(0, 2)])
    with pytest.raises(DanglingEdge):
        ComputationGraph(2, [(-1, 0)])
    with pytest.raises(SelfLoop):
        ComputationGraph(3, [(1, 1)])
    with pytest.raises(KindMismatch):
        ComputationGraph(2, [(0, 1)], kinds=["output", "output"])


def test_graph_is_immutable(dot2):
    with pytest.raises(ValueError):
        dot2.edges[0, 0] = 3


def test_degrees_dot2(dot2):
    d = degrees(dot2)
    assert list(d.d_out[:6]) == [1] * 6
    assert d.d_in[6] == 2
    assert d.max_in == 2 and d.min_in == 0


def test_degrees_hypercube_origin():
    d = degrees(hypercube(3))
    assert d.d_out[0] == 3 and d.d_in[0] == 0


def test_double_edge_counts_twice():
    g = ComputationGraph(2, [(0, 1), (0, 1)])
    assert degrees(g).d_out[0] == 2


def test_normalize_dot2_unit_weights(dot2):
    wg = normalize_out_degree(dot2)
    assert np.allclose(wg.weights, 1.0)
    assert wg.n_edges == 6


def test_normalize_hypercube_weight():
    wg = normalize_out_degree(hypercube(2))
    assert wg.weight(0b00, 0b01) == pytest.approx(0.5)


def test_parallel_edges_accumulate():
    g = ComputationGraph(2, [(0, 1), (0, 1)])
    wg = normalize_out_degree(g)
    assert wg.n_edges == 1
    assert wg.weight(0, 1) == pytest.approx(1.0)
    # the unit support collapses the pair to weight 1 as well
    assert undirected_support(g).weight(0, 1) == 1.0


def test_two_path_laplacian():
    L = laplacian(WeightedGraph(2, [(0, 1)], [2.0]), "tilde")
    assert np.array_equal(L.toarray(), [[2.0, -2.0], [-2.0, 2.0]])
    assert quadratic_form(L, [1.0, 0.0]) == pytest.approx(2.0)


def test_triangle_unit_spectrum():
    g = ComputationGraph(3, [(0, 1), (0, 2), (1, 2)])
    lam = np.linalg.eigvalsh(laplacian(undirected_support(g), "unit").toarray())
    assert np.allclose(lam, [0, 3, 3])


def test_vertex_weight_only():
    L = laplacian(WeightedGraph(1, (), (), vertex_weights=[2.0]), "tilde")
    assert np.array_equal(L.toarray(), [[2.0]])


def test_normalized_variant():
    g = ComputationGraph(3, [(0, 1), (1, 2)])
    L = laplacian(normalize_out_degree(g), "normalized").toarray()
    assert np.allclose(np.diag(L), 1.0)
    lam = np.linalg.eigvalsh(L)
    assert lam[0] == pytest.approx(0.0, abs=1e-12)
    assert lam[-1] <= 2.0 + 1e-12
    with pytest.raises(ZeroDegreeVertex):
        laplacian(normalize_out_degree(ComputationGraph(3, [(0, 1)])), "normalized")


def test_unknown_variant():
    with pytest.raises(ValueError):
        laplacian(normalize_out_degree(hypercube(2)), "signless")


def test_boundary_cost_examples(dot2):
    assert boundary_cost(dot2, []) == 0.0
    assert boundary_cost(dot2, range(7)) == 0.0
    assert boundary_cost(dot2, [4]) == pytest.approx(3.0)
    assert boundary_cost(hypercube(2), [0]) == pytest.approx(1.0)
    with pytest.raises(InvalidVertexId):
        boundary_cost(dot2, [7])


def test_quadratic_form_kernel_and_dims(dot2):
    L = laplacian(normalize_out_degree(dot2))
    assert quadratic_form(L, np.ones(7)) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(DimensionMismatch):
        quadratic_form(L, np.ones(6))


@st.composite
def dags(draw, max_n=12):
    n = draw(st.integers(2, max_n))
    pairs = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=3 * n))
    # parallel edges allowed: keep duplicates, only drop self-pairs
    edges = [(min(u, v), max(u, v)) for u, v in pairs if u != v]
    return ComputationGraph(n, edges)


def _boundary_oracle(g, S):
    S = set(S)
    d_out = [0] * g.n
    for u, _ in g.edges.tolist():
        d_out[u] += 1
    return sum(1.0 / d_out[u] for u, v in g.edges.tolist() if (u in S) != (v in S))


@settings(max_examples=60, deadline=None)
@given(dags(), st.data())
def test_cut_identity_property(g, data):
    S = data.draw(st.sets(st.integers(0, g.n - 1)))
    L = laplacian(normalize_out_degree(g))
    expected = _boundary_oracle(g, S)
    assert boundary_cost(g, S) == pytest.approx(expected, rel=1e-12, abs=1e-12)
    assert quadratic_form(L, indicator(g.n, S)) == pytest.approx(expected, rel=1e-9, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(dags())
def test_laplacian_properties(g):
    wg = normalize_out_degree(g)
    for variant in ("tilde", "unit"):
        A = laplacian(wg, variant).toarray()
        assert np.array_equal(A, A.T)
        assert np.abs(A.sum(axis=1)).max() <= 1e-12
        assert (A - np.diag(np.diag(A)) <= 0).all()
        assert np.linalg.eigvalsh(A).min() >= -1e-9 * max(A.max(), 1.0)
    # trace of L~ = sum of weighted degrees = 2 * number of non-sink vertices
    assert np.trace(laplacian(wg).toarray()) == pytest.approx(2 * int((g.out_degree > 0).sum()))


def _components_union_find(g):
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in g.edges.tolist():
        parent[find(u)] = find(v)
    return len({find(x) for x in range(g.n)})


@settings(max_examples=60, deadline=None)
@given(dags())
def test_zero_multiplicity_equals_components(g):
    wg = normalize_out_degree(g)
    lam = np.linalg.eigvalsh(laplacian(wg).toarray())
    expected = _components_union_find(g)
    assert connected_components(wg) == expected
    assert int((lam < 1e-8).sum()) == expected


def test_equality_ignores_edge_order():
    a = ComputationGraph(3, [(0, 2), (1, 2)])
    b = ComputationGraph(3, [(1, 2), (0, 2)])
    assert a == b
    assert a != ComputationGraph(3, [(0, 1), (1, 2)])


def test_exhaustive_cut_identity_small():
    g = hypercube(3)
    L = laplacian(normalize_out_degree(g))
    for r in range(9):
        for S in itertools.combinations(range(8), r):
            assert quadratic_form(L, indicator(8, S)) == pytest.approx(_boundary_oracle(g, S), abs=1e-12)
