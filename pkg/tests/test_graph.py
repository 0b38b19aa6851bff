import pytest

from cosmo.errors import FormatError, MereologyViolation
from cosmo.graph import KnowledgeGraph, TextValue, load_graph, member_of, parse_graph
from cosmo.model import ItemId

Q = ItemId.parse


def test_example_graph(example_graph):
    assert len(example_graph.triples) == 4
    assert example_graph.label(Q("Q18844224"), "cs") == "autorka sci-fi"
    assert example_graph.value(Q("Q42"), Q("P569")) == 1952


@pytest.mark.parametrize(
    "x, q, expected",
    [("Q42", "Q5", True), ("Q18844224", "Q18844224", True), ("Q214197", "Q18844224", False)],
)
def test_member_of_examples(example_graph, x, q, expected):
    assert member_of(Q(x), Q(q), example_graph) is expected


def test_member_of_subclass_chain():
    g = parse_graph("triple Q1 P31 Q2\ntriple Q2 P279 Q3\ntriple Q3 P279 Q4\ntriple Q9 P279 Q4\n")
    assert member_of(Q("Q1"), Q("Q4"), g)
    assert member_of(Q("Q9"), Q("Q4"), g)
    assert not member_of(Q("Q4"), Q("Q1"), g)
    assert not member_of(TextValue("Q4"), Q("Q4"), g)


def test_empty_graph(tmp_path):
    path = tmp_path / "empty.graph"
    path.write_text("")
    g = load_graph(path)
    assert len(g.triples) == 0 and g.items() == set()


def test_partof_cycle_rejected():
    with pytest.raises(MereologyViolation):
        parse_graph("partof Q1 Q2\npartof Q2 Q1\n")
    with pytest.raises(MereologyViolation):
        parse_graph("partof Q1 Q1\n")


def test_partof_closure():
    g = parse_graph("partof Q1 Q2\npartof Q2 Q3\n")
    assert g.is_proper_part(Q("Q1"), Q("Q3"))
    assert not g.is_proper_part(Q("Q3"), Q("Q1"))
    assert g.proper_parts_of(Q("Q3")) == {Q("Q1"), Q("Q2")}


def test_text_objects_and_comments():
    g = parse_graph('triple Q1 P17 "a # not a comment"   # real comment\n')
    ((s, p, o),) = g.triples
    assert o == TextValue("a # not a comment")


@pytest.mark.parametrize(
    "text, line",
    [
        ("triple Q1 P2\n", 1),
        ("\ntriple Q1 Q2 Q3\n", 2),
        ("triple Q1 P2 42\n", 1),
        ('label Q1 en unquoted\n', 1),
        ("value Q1 P2 many\n", 1),
        ("frobnicate Q1\n", 1),
        ('triple Q1 P2 "unterminated\n', 1),
    ],
)
def test_format_errors(text, line):
    with pytest.raises(FormatError) as exc:
        parse_graph(text)
    assert exc.value.line == line


def test_to_text_round_trip(example_graph):
    again = parse_graph(example_graph.to_text())
    assert again.triples == example_graph.triples
    assert again.labels == example_graph.labels
    assert again.values == example_graph.values


def test_triple_order_irrelevant():
    a = parse_graph("triple Q1 P31 Q2\ntriple Q2 P279 Q3\n")
    b = parse_graph("triple Q2 P279 Q3\ntriple Q1 P31 Q2\n")
    assert a.triples == b.triples and a.member_of(Q("Q1"), Q("Q3")) == b.member_of(Q("Q1"), Q("Q3"))


def test_direct_construction():
    g = KnowledgeGraph([(Q("Q1"), Q("P1"), Q("Q2"))])
    assert g.extension(Q("P1")) == [(Q("Q1"), Q("Q2"))]
