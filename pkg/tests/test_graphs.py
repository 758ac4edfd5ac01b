import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kgweight.errors import GraphFormatError
from kgweight.graphs import (
    KGraph,
    SignedGraph,
    build_b_subgraph,
    build_bernoulli_graph,
    build_main_graph,
    build_wheel_graph,
    cyclic_rotate,
    gamma_prime_family,
    is_lie_graph,
    known_weight,
    parse,
    render,
    validate,
)

BUILDERS = [
    build_main_graph,
    build_b_subgraph,
    *[lambda n=n: build_bernoulli_graph(n) for n in range(1, 6)],
    *[lambda k=k: build_wheel_graph(k) for k in range(1, 5)],
]


@pytest.mark.parametrize("build", BUILDERS)
def test_builders_validate(build):
    assert validate(build()) == []


def test_validate_reports_violations():
    g = KGraph(("z", "w"), ("U",), (("U", "z"),), "z")
    assert any("edge from type II" in p for p in validate(g))
    g = KGraph(("z", "w", "w"), ("U",), (), "z")
    assert any("duplicate label" in p for p in validate(g))
    g = KGraph(("z",), ("U",), (("z", "z"),), "U")
    probs = validate(g)
    assert any("pinned" in p for p in probs)
    assert any("self-loop" in p for p in probs)
    g = KGraph(("z",), ("U",), (("z", "Q"),), "z")
    assert any("unknown edge target" in p for p in validate(g))


def test_main_graph_structure():
    g = build_main_graph()
    assert g.typeI == ("z", "w", "b", "a1", "a2", "a3", "a4")
    assert g.typeII == ("U", "V")
    assert g.pinned == "z"
    assert len(g.edges) == 14
    assert all(len(g.out_edges(v)) == 2 for v in g.typeI)
    assert all(g.in_degree(v) <= 1 for v in g.typeI)
    assert set(g.out_edges("z")) == {("z", "w"), ("z", "V")}
    assert set(g.out_edges("w")) == {("w", "b"), ("w", "V")}
    assert set(g.out_edges("b")) == {("b", "U"), ("b", "V")}
    assert is_lie_graph(g)


def test_edge_order_convention():
    g = build_main_graph()
    sources = [s for s, _ in g.edges]
    assert sources == sorted(sources, key=g.typeI.index)
    for v in g.typeI:
        targets = [t for _, t in g.out_edges(v)]
        assert targets == sorted(targets)


def test_is_lie_graph_rejects_three_out_edges():
    g = build_main_graph()
    h = KGraph(g.typeI, g.typeII, g.edges + (("w", "a1"),), g.pinned)
    assert not is_lie_graph(h)


def test_bernoulli_graphs_are_not_lie_graphs():
    # a single boundary vertex besides the reference point
    assert not is_lie_graph(build_bernoulli_graph(2))


def test_bernoulli_graph_shape():
    g1 = build_bernoulli_graph(1)
    assert set(g1.edges) == {("a1", "P"), ("a1", "z")}
    g4 = build_bernoulli_graph(4)
    assert len(g4.edges) == 8
    assert set(g4.out_edges("a4")) == {("a4", "P"), ("a4", "z")}
    assert g4.out_edges("z") == []
    for v in g4.free_interior:
        assert len(g4.out_edges(v)) == 2
        assert g4.in_degree(v) <= 1


def test_b_subgraph():
    g = build_b_subgraph()
    assert g.typeI == ("w", "b") and g.typeII == ("U", "V") and g.pinned == "w"
    assert set(g.out_edges("b")) == {("b", "U"), ("b", "V")}
    assert ("w", "b") in g.edges


def test_cyclic_rotate():
    g = build_main_graph()
    r = cyclic_rotate(g)
    swap = {"U": "V", "V": "U"}
    assert r.edges == tuple((s, swap.get(t, t)) for s, t in g.edges)
    assert cyclic_rotate(r) == g
    assert validate(r) == [] and len(r.edges) == len(g.edges)
    b = build_bernoulli_graph(3)
    assert cyclic_rotate(b) == b


def test_cyclic_rotate_three_cycle():
    g = KGraph(("z", "a"), ("A", "B", "C"), (("z", "A"), ("a", "B"), ("a", "C")), "z")
    r = cyclic_rotate(g)
    assert r.edges == (("z", "B"), ("a", "C"), ("a", "A"))
    assert cyclic_rotate(cyclic_rotate(r)) == g


def test_gamma_prime_family_b_subgraph():
    fam = gamma_prime_family(build_b_subgraph(), "U")
    assert len(fam) == 8
    assert fam[0].graph == build_b_subgraph()
    assert fam[0].sign == -1
    assert all(isinstance(m, SignedGraph) for m in fam)
    assert sorted(m.graph.in_degree("U") for m in fam) == [1, 2, 2, 2, 3, 3, 3, 4]


def test_gamma_prime_family_no_candidates():
    g = KGraph(("z", "a"), ("U",), (("a", "U"),), "z")
    fam = gamma_prime_family(g)
    assert len(fam) == 1 and fam[0].graph == g and fam[0].sign == -1


@pytest.mark.parametrize("build", BUILDERS)
def test_gamma_prime_family_sizes_and_signs(build):
    g = build()
    one = g.typeII[0]
    k = sum(1 for _, t in g.edges if t != one)
    if k > 12:
        pytest.skip("family too large to enumerate here")
    fam = gamma_prime_family(g, one)
    assert len(fam) == 2**k
    base = g.in_degree(one)
    for m in fam:
        changed = sum(1 for e, f in zip(g.edges, m.graph.edges) if e != f)
        assert m.sign == (-1) ** (base + changed)


def test_known_weight_table():
    d = known_weight(build_bernoulli_graph(3))
    assert d is not None and d.kind == "bernoulli" and d.text == "B_3(x)/6"
    assert d.evaluate(Fraction(1, 4)) == Fraction(3, 64) / 6
    w = known_weight(build_wheel_graph(2))
    assert w.constant == Fraction(1, 24)
    assert known_weight(build_wheel_graph(4)).constant == Fraction(-1, 30) / 48
    assert known_weight(build_main_graph()) is None


def test_known_weight_two_edge_pattern():
    g = KGraph(("z", "a"), ("U", "V"), (("z", "U"), ("z", "V"), ("a", "U"), ("a", "z")), "z")
    d = known_weight(g)
    assert d is not None and d.kind == "two_edge_rational"
    assert "B_p" in d.text


@pytest.mark.parametrize("build", BUILDERS)
def test_render_parse_roundtrip(build):
    g = build()
    assert parse(render(g)) == g


def test_parse_rejects_bad_documents():
    good = json.loads(render(build_main_graph()))
    with pytest.raises(GraphFormatError):
        parse(json.dumps({**good, "extra": 1}))
    with pytest.raises(GraphFormatError):
        parse(json.dumps({k: v for k, v in good.items() if k != "pinned"}))
    with pytest.raises(GraphFormatError):
        parse(json.dumps({**good, "typeI": ["1z"] + good["typeI"][1:]}))
    with pytest.raises(GraphFormatError):
        parse(json.dumps({**good, "edges": good["edges"] + [["U", "z"]]}))
    with pytest.raises(GraphFormatError):
        parse("not json")


labels = st.from_regex(r"[a-z][a-z0-9]{0,3}", fullmatch=True)


@st.composite
def random_graphs(draw):
    names = draw(st.lists(labels, min_size=2, max_size=8, unique=True))
    split = draw(st.integers(1, len(names) - 1))
    t1, t2 = names[:split], [n.upper() for n in names[split:]]
    everything = t1 + t2
    edges = draw(
        st.lists(
            st.tuples(st.sampled_from(t1), st.sampled_from(everything)).filter(lambda e: e[0] != e[1]),
            max_size=8,
        )
    )
    return KGraph(tuple(t1), tuple(t2), tuple(edges), t1[0])


@settings(max_examples=100, deadline=None)
@given(random_graphs())
def test_roundtrip_and_rotation_properties(g):
    if validate(g):
        return
    assert parse(render(g)) == g
    r = cyclic_rotate(g)
    assert validate(r) == [] and len(r.edges) == len(g.edges)
    n = len(g.typeII)
    h = g
    for _ in range(n):
        h = cyclic_rotate(h)
    assert h == g
