import pytest
from hypothesis import given, strategies as st

from cosmo.errors import CsmOutOfRange, MalformedToken
from cosmo.model import (
    Block,
    CompareOp,
    Comparison,
    Constructor,
    ConstructorKind,
    CsmId,
    FunctionDecl,
    Instantiation,
    ItemId,
    ItemKind,
    JoinDecl,
    JoinKind,
    Link,
    LinkKind,
    Literal,
    LocalVar,
    Model,
    PredicateDecl,
    Range,
    RoleDecl,
    ValueConstraint,
    classify_identifier,
    is_variable,
    to_data,
)

Q = lambda n: ItemId(ItemKind.Q, n)  # noqa: E731


def test_item_examples():
    assert classify_identifier("Q42") == ItemId(ItemKind.Q, 42)
    assert classify_identifier("P31") == ItemId(ItemKind.P, 31)
    assert str(classify_identifier("Z12345")) == "Z12345"


def test_local_var_and_csm():
    assert classify_identifier("C1") == LocalVar("C1")
    assert isinstance(classify_identifier("C1"), LocalVar)
    assert classify_identifier("CSM007") == CsmId(7)
    assert str(CsmId(7)) == "CSM007"


@pytest.mark.parametrize("token", ["1abc", "r-1", "a b", "", "r__1", "_x"])
def test_malformed_tokens(token):
    with pytest.raises(MalformedToken):
        classify_identifier(token)


def test_csm_out_of_range():
    with pytest.raises(CsmOutOfRange):
        classify_identifier("CSM015")
    with pytest.raises(CsmOutOfRange):
        CsmId(0)


def test_item_number_positive():
    with pytest.raises(MalformedToken):
        ItemId(ItemKind.Q, 0)
    with pytest.raises(MalformedToken):
        ItemId.parse("Q042")


@given(st.sampled_from("QPZ"), st.integers(min_value=1, max_value=10**12))
def test_item_render_parse_identity(letter, n):
    text = f"{letter}{n}"
    assert str(ItemId.parse(text)) == text


def test_variable_rule_accepts_unicode_letters():
    assert is_variable("año")
    assert is_variable("r_a")
    assert not is_variable("Q5")


def test_value_constraint_invariants():
    with pytest.raises(ValueError):
        ValueConstraint(())
    with pytest.raises(ValueError):
        Range(5, 1)
    assert CompareOp.LE.holds(3, 3)
    assert not CompareOp.LT.holds(3, 3)
    assert Comparison(CompareOp.GT, 2).op.holds(3, 2)


def test_kind_checks():
    with pytest.raises(MalformedToken):
        RoleDecl("r1", ItemId.parse("P5"))
    with pytest.raises(MalformedToken):
        PredicateDecl(Q(5), "a", "b")
    with pytest.raises(ValueError):
        FunctionDecl(ItemId.parse("Z1"), ())
    with pytest.raises(MalformedToken):
        Instantiation(Q(5), ItemId.parse("P3"))


def test_join_homogeneity_and_partner():
    j = JoinDecl.of(ItemId.parse("P1"), ItemId.parse("P2"))
    assert j.kind is JoinKind.PP and j.homogeneous
    assert j.partner(ItemId.parse("P2")) == ItemId.parse("P1")
    assert not JoinDecl(JoinKind.QQ, Q(1), ItemId.parse("P2")).homogeneous


def _c1():
    b = Block(PredicateDecl(ItemId.parse("P40"), "r1", "r2"), RoleDecl("r1", Q(7566)), RoleDecl("r2", Q(29514218)))
    return Constructor(ConstructorKind.TYPE, "C1", (b,))


def test_structural_equality_and_accessors():
    m = Model((_c1(), Link(LinkKind.SUB_CONSTRUCTOR_OF, "C3", "C1")))
    assert m == Model((_c1(), Link(LinkKind.SUB_CONSTRUCTOR_OF, "C3", "C1")))
    assert m.constructor("C1").blocks[0].fillers() == {Q(7566), Q(29514218)}
    assert [ln.source for ln in m.links] == ["C3"]
    with pytest.raises(KeyError):
        m.constructor("nope")


def test_to_data_shape():
    data = to_data(Model((_c1(),)))
    block = data["declarations"][0]["blocks"][0]
    assert block["predicate"] == {"item": "P40", "vars": ["r1", "r2"]}
    assert block["roles"][1]["filler"] == "Q29514218"


def test_literal_kinds():
    assert Literal(Q(1)).value == Q(1)
    assert Literal("text").value == "text"
    with pytest.raises((TypeError, ValueError)):
        Literal(["not", "allowed"])
