import pytest

from iobound import TraceBuilder, UnknownHandle, UseAfterBuild, inner_product, validate_dag


def test_add_two_inputs():
    tb = TraceBuilder()
    x, y = tb.input("x"), tb.input("y")
    tb.apply("add", [x, y])
    g = tb.build()
    assert g.n == 3
    assert sorted(map(tuple, g.edges.tolist())) == [(0, 2), (1, 2)]
    assert g.kinds == ("input", "input", "output")
    assert g.labels == ("x", "y", "add")


def test_replay_inner_product():
    tb = TraceBuilder()
    a = [tb.input(f"a{i}") for i in range(2)]
    b = [tb.input(f"b{i}") for i in range(2)]
    p0, p1 = a[0] * b[0], a[1] * b[1]
    p0 + p1
    g = tb.build()
    ref = inner_product(2)
    # same vertex numbering as the generator, so identical edges mean isomorphic
    assert sorted(map(tuple, g.edges.tolist())) == sorted(map(tuple, ref.edges.tolist()))
    assert g.kinds == ref.kinds
    assert g.labels[:4] == ref.labels[:4]
    validate_dag(g)


def test_operators_record_vertices():
    tb = TraceBuilder()
    x, y = tb.input(), tb.input()
    z = -((x - y) / (x @ y))
    assert len(tb) == 6
    g = tb.build()
    assert g.labels[z.index] == "neg"
    assert g.in_degree.tolist() == [0, 0, 2, 2, 2, 1]


def test_repeated_operand_is_parallel_edge():
    tb = TraceBuilder()
    x = tb.input()
    x * x
    g = tb.build()
    assert g.n_edges == 2
    assert g.out_degree[0] == 2


def test_stale_handle_after_build():
    tb = TraceBuilder()
    x = tb.input()
    tb.build()
    with pytest.raises(UnknownHandle):
        tb.apply("neg", [x])
    with pytest.raises(UseAfterBuild):
        tb.input()
    with pytest.raises(UseAfterBuild):
        tb.build()


def test_foreign_handle():
    a, b = TraceBuilder(), TraceBuilder()
    x = a.input()
    with pytest.raises(UnknownHandle):
        b.apply("neg", [x])
    with pytest.raises(UnknownHandle):
        b.apply("neg", [3])
    with pytest.raises(TypeError):
        x + 1
