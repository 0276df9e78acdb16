"""Text formats: parsing, printing, round-trips, error positions."""

import random

import pytest

import rewb.expr as E
from rewb.data import graph
from rewb.errors import SourceError
from rewb.randgen import random_expr, random_graph, random_word
from rewb.syntax import (
    parse_expr,
    parse_graph,
    parse_valuation,
    parse_word,
    print_expr,
    print_graph,
    print_valuation,
    print_word,
)


def test_parse_binding_and_star():
    e = parse_expr("a@x(b[x=]*)")
    assert e == E.Bind("a", "x", E.Star(E.Test("b", E.Eq("x"))))
    assert parse_expr("(a@x(b[x=]))*") == E.Star(E.Bind("a", "x", E.Test("b", E.Eq("x"))))


def test_parse_precedence():
    assert parse_expr("a+b.c") == E.Union(E.Atom("a"), E.Concat(E.Atom("b"), E.Atom("c")))
    assert parse_expr("a.b*") == E.Concat(E.Atom("a"), E.Star(E.Atom("b")))
    assert parse_expr("a+b+c") == E.Union(E.Union(E.Atom("a"), E.Atom("b")), E.Atom("c"))


def test_parse_condition_connectives():
    e = parse_expr("a[x=|y!=&~z=]")
    assert e == E.Test(
        "a", E.Or(E.Eq("x"), E.And(E.Neq("y"), E.Not(E.Eq("z"))))
    )


def test_parse_errors_carry_positions():
    with pytest.raises(SourceError) as err:
        parse_expr("a[")
    assert (err.value.line, err.value.column) == (1, 3)
    with pytest.raises(SourceError):
        parse_expr("")
    with pytest.raises(SourceError):
        parse_expr("a b")  # juxtaposition is not concatenation
    with pytest.raises(SourceError):
        parse_expr("eps@x(a)")  # 'eps' is reserved


def test_print_examples():
    assert print_expr(E.Star(E.Atom("a"))) == "a*"
    assert print_expr(E.Union(E.Atom("a"), E.Concat(E.Atom("b"), E.Atom("c")))) == "a+b.c"
    assert print_expr(E.Concat(E.Union(E.Atom("a"), E.Atom("b")), E.Atom("c"))) == "(a+b).c"


def test_print_respects_fold_directions():
    right_union = E.Union(E.Atom("a"), E.Union(E.Atom("b"), E.Atom("c")))
    assert print_expr(right_union) == "a+(b+c)"
    assert parse_expr(print_expr(right_union)) == right_union
    left_or = E.Or(E.Or(E.Eq("x"), E.Eq("y")), E.Eq("z"))
    test = E.Test("a", left_or)
    assert parse_expr(print_expr(test)) == test


def test_word_round_trip():
    w = parse_word("a:5 b:5 b:5")
    assert w == (("a", "5"), ("b", "5"), ("b", "5"))
    assert print_word(w) == "a:5 b:5 b:5"
    assert parse_word("") == ()
    with pytest.raises(SourceError):
        parse_word("a5")


def test_graph_format():
    g = parse_graph("edge u a 5 v")
    assert g.nodes == {"u", "v"}
    assert g.edges == {("u", "a", "5", "v")}
    dup = parse_graph("edge u a 5 v\nedge u a 5 v")
    assert len(dup.edges) == 1
    with pytest.raises(SourceError):
        parse_graph("source w")
    commented = parse_graph("# heading\nnode lonely\nedge u a 5 v # trailing\nsource u\nsink v\n")
    assert commented.nodes == {"lonely", "u", "v"}
    assert commented.source == "u" and commented.sink == "v"
    with pytest.raises(SourceError):
        parse_graph("source u\nsource u\nnode u")
    with pytest.raises(SourceError):
        parse_graph("edge u a v")


def test_print_graph_is_deterministic():
    g1 = graph([("u", "a", "5", "v"), ("u", "b", "1", "v")], nodes=["w"], source="u")
    g2 = graph(
        list(reversed([("u", "a", "5", "v"), ("u", "b", "1", "v")])), nodes=["w"], source="u"
    )
    assert print_graph(g1) == print_graph(g2)
    assert print_graph(g1).splitlines()[0] == "node u"


def test_valuation_format():
    assert parse_valuation("x=5,y=po") == {"x": "5", "y": "po"}
    assert parse_valuation("") == {}
    with pytest.raises(SourceError):
        parse_valuation("x=1,x=2")
    with pytest.raises(SourceError):
        parse_valuation("x")
    assert print_valuation({"y": "po", "x": "5"}) == "x=5,y=po"


def test_expr_fuzz_round_trip():
    rng = random.Random(99)
    for _ in range(1000):
        e = random_expr(rng, 20)
        assert parse_expr(print_expr(e)) == e


def test_word_fuzz_round_trip():
    rng = random.Random(100)
    for _ in range(1000):
        w = random_word(rng, 30)
        assert parse_word(print_word(w)) == w


def test_graph_fuzz_round_trip():
    rng = random.Random(101)
    for _ in range(1000):
        g = random_graph(rng, max_nodes=8, max_edges=20)
        parsed = parse_graph(print_graph(g))
        assert parsed.nodes == g.nodes
        assert parsed.edges == g.edges
        assert parse_graph(print_graph(parsed)) == parsed
