import random
from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from cosmo import parse
from cosmo.algebra import block_matching, generalize, instantiate, merge, subsumes
from cosmo.errors import AlreadyType, EmptyBindings, NotATypeConstructor, UnboundType
from cosmo.evaluate import eval_constructor
from cosmo.model import ConstructorKind, ItemId, Model
from cosmo.validate import validate

from modelgen import EVAL_Q, loosen, random_eval_constructor, random_graph

Q = ItemId.parse


def test_generalize_c5(c5_model):
    g = generalize(c5_model.constructor("C5"))
    assert g.kind is ConstructorKind.TYPE and g.name == "C5_gen"
    assert [str(b.predicate.pitem) for b in g.blocks] == ["P106", "P136"]
    assert g.instantiations() == []


def test_generalize_c2_is_c1(c123_model):
    g = generalize(c123_model.constructor("C2"))
    assert g.blocks == c123_model.constructor("C1").blocks
    with pytest.raises(AlreadyType):
        generalize(g)


def test_instantiate_c1_is_c2(c123_model):
    c = instantiate(c123_model.constructor("C1"), {Q("Q29514218"): Q("Q62070381")})
    assert c.kind is ConstructorKind.INSTANCE and c.name == "C1_inst"
    assert c.blocks == c123_model.constructor("C2").blocks


def test_instantiate_errors(c123_model):
    c1 = c123_model.constructor("C1")
    with pytest.raises(EmptyBindings):
        instantiate(c1, {})
    with pytest.raises(UnboundType):
        instantiate(c1, {Q("Q5"): Q("Q42")})
    with pytest.raises(NotATypeConstructor):
        instantiate(c123_model.constructor("C2"), {Q("Q29514218"): Q("Q1")})


def test_douglas_adams_round_trip(c5_model):
    c5 = c5_model.constructor("C5")
    back = instantiate(generalize(c5), {Q("Q5"): Q("Q42")})
    assert back.kind is c5.kind and back.blocks == c5.blocks


def test_subsumes_examples(c123_model):
    c1, c2, c3 = (c123_model.constructor(n) for n in ("C1", "C2", "C3"))
    assert subsumes(c1, c3)
    assert subsumes(c1, c2)
    assert not subsumes(c3, c1)
    assert not subsumes(c2, c1)


def test_subsumes_with_subclass_table():
    general = parse("TC:G(P1(a,b), a:Q1, b:Q2)").model.constructor("G")
    specific = parse("TC:S(P1(a,b), a:Q10, b:Q2)").model.constructor("S")
    assert not subsumes(general, specific)
    assert subsumes(general, specific, {Q("Q10"): {Q("Q5")}, Q("Q5"): {Q("Q1")}})


def test_subsumes_through_joins():
    general = parse("TC:G(P1(a,b), a:Q1, b:Q2, Join(P1,P2), Join(Q2,Q3))").model.constructor("G")
    specific = parse("TC:S(P2(a,b), a:Q1, b:Q3)").model.constructor("S")
    assert subsumes(general, specific)
    assert not subsumes(specific, general)


def test_merge_renames_and_concatenates(c5_model, example_graph):
    c5 = c5_model.constructor("C5")
    first = replace(c5, kind=ConstructorKind.TYPE, name="A", blocks=(replace(c5.blocks[0], instantiations=()),))
    second = replace(c5, kind=ConstructorKind.TYPE, name="B", blocks=c5.blocks[1:])
    m = merge(first, second)
    assert m.name == "A_merge" and len(m.blocks) == 2
    expected = [b.tuples for b in eval_constructor(generalize(c5), example_graph).blocks]
    assert [b.tuples for b in eval_constructor(m, example_graph).blocks] == expected


def test_merge_duplicate_renames_variables(c123_model):
    c1 = c123_model.constructor("C1")
    m = merge(c1, c1, "Twice")
    assert m.name == "Twice"
    assert [(b.predicate.var1, b.predicate.var2) for b in m.blocks] == [("r1", "r2"), ("r1_2", "r2_2")]
    assert "r1->r1_2" in m.provenance
    assert validate(Model((m,))).findings == []
    assert m.kind is ConstructorKind.TYPE
    assert merge(c1, c123_model.constructor("C2")).kind is ConstructorKind.INSTANCE


def test_merge_composition():
    person = parse("TC:Person(P27(r1,r2), r1:Q5, r2:Q6256)").model.constructor("Person")
    job = parse("TC:Job(P106(r1,r2), r1:Q5, r2:Q28640, IsMand(r2))").model.constructor("Job")
    whole = merge(person, job, "Profile")
    assert [str(b.predicate.pitem) for b in whole.blocks] == ["P27", "P106"]
    assert whole.blocks[1].mandatories == ("r2_2",)
    assert block_matching(person, whole) == {0: 0}
    assert block_matching(job, whole) == {0: 1}


# laws, 1000 cases each

def _type_constructor(seed):
    c = random_eval_constructor(seed)
    return replace(c, kind=ConstructorKind.TYPE, blocks=tuple(replace(b, instantiations=()) for b in c.blocks))


def _bindings(c, seed):
    r = random.Random(seed)
    fillers = sorted(set().union(*(b.fillers() for b in c.blocks)))
    keys = r.sample(fillers, r.randint(1, min(3, len(fillers))))
    return {k: r.choice(EVAL_Q) for k in keys}


@settings(max_examples=1000, deadline=None)
@given(st.integers(0, 10**9), st.integers(0, 10**9))
def test_generalize_inverts_instantiate(cseed, bseed):
    tc = _type_constructor(cseed)
    b = _bindings(tc, bseed)
    ic = instantiate(tc, b)
    assert ic.kind is ConstructorKind.INSTANCE
    assert generalize(ic).blocks == tc.blocks
    assert instantiate(generalize(ic), b).blocks == ic.blocks


@settings(max_examples=1000, deadline=None)
@given(st.integers(0, 10**9))
def test_subsumes_reflexive(seed):
    c = random_eval_constructor(seed)
    assert subsumes(c, c)


@settings(max_examples=1000, deadline=None)
@given(st.integers(0, 10**9), st.integers(0, 10**9), st.integers(0, 10**9))
def test_subsumes_transitive(seed, s1, s2):
    low = random_eval_constructor(seed)
    mid = loosen(low, s1)
    high = loosen(mid, s2)
    assert subsumes(mid, low) and subsumes(high, mid)
    assert subsumes(high, low)


@settings(max_examples=1000, deadline=None)
@given(st.integers(0, 10**9), st.integers(0, 10**9), st.integers(0, 10**9))
def test_subsumes_transitive_random_triples(a, b, c):
    x, y, z = (random_eval_constructor(s % 400) for s in (a, b, c))
    if subsumes(x, y) and subsumes(y, z):
        assert subsumes(x, z)


@settings(max_examples=1000, deadline=None)
@given(st.integers(0, 10**9), st.integers(0, 10**9), st.integers(0, 10**9))
def test_monotone_generalisation_on_graphs(seed, lseed, gseed):
    specific = random_eval_constructor(seed, functions=False)
    general = loosen(specific, lseed)
    g = random_graph(gseed)
    matching = block_matching(general, specific)
    assert matching is not None
    gen_blocks = eval_constructor(general, g).blocks
    spec_blocks = eval_constructor(specific, g).blocks
    for gi, si in matching.items():
        assert spec_blocks[si].tuples <= gen_blocks[gi].tuples
