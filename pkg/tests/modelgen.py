"""Seeded random generators for models and knowledge graphs."""

from __future__ import annotations

import random

from cosmo.graph import P31, P279, KnowledgeGraph, TextValue
from cosmo.lexicon import default_lexicon
from cosmo.model import (
    Block,
    CompareOp,
    Comparison,
    Constructor,
    ConstructorKind,
    FunctionDecl,
    Instantiation,
    ItemId,
    ItemKind,
    JoinDecl,
    JoinKind,
    Link,
    LinkKind,
    Literal,
    Model,
    PredicateDecl,
    Range,
    RoleDecl,
    RoleKind,
    ValueConstraint,
)

RESERVED = default_lexicon().reserved_words()

_VAR_STEMS = ["r", "x", "y", "role", "agent", "año", "ñandú", "obj", "sujeto", "r_a", "k_2_b", "Rol", "partA",
              "élève", "nom"]
_TEXTS = ["Argentina", "has scholarship", "autorka sci-fi", "Q42", "", " padded ", 'say "hi"', "back\\slash",
          "a,b", "{braces}", "<5", "1..2", "12", "línea\nnueva", "日本語", "x//y", "tab\there"]


def q(n: int) -> ItemId:
    return ItemId(ItemKind.Q, n)


def p(n: int) -> ItemId:
    return ItemId(ItemKind.P, n)


def z(n: int) -> ItemId:
    return ItemId(ItemKind.Z, n)


class ModelGen:
    """Random grammar-valid models that survive a text round trip."""

    def __init__(self, seed: int, q_pool: int = 10**6, p_pool: int = 10**4):
        self.r = random.Random(seed)
        self.q_pool = q_pool
        self.p_pool = p_pool

    def qi(self) -> ItemId:
        r = self.r
        return q(r.randint(1, 12) if r.random() < 0.6 else r.randint(1, self.q_pool))

    def pi(self) -> ItemId:
        r = self.r
        return p(r.randint(1, 8) if r.random() < 0.6 else r.randint(1, self.p_pool))

    def var(self, taken: set[str]) -> str:
        r = self.r
        while True:
            v = r.choice(_VAR_STEMS) + (str(r.randint(1, 99)) if r.random() < 0.7 else "")
            if v not in taken and v not in RESERVED:
                return v

    def number(self):
        r = self.r
        if r.random() < 0.5:
            return r.randint(-1000, 100000)
        return round(r.uniform(-500, 500), r.randint(1, 3))

    def constraint(self) -> ValueConstraint:
        r = self.r
        items = []
        for _ in range(r.randint(1, 3)):
            kind = r.randrange(5)
            if kind == 0:
                items.append(Literal(self.qi()))
            elif kind == 1:
                items.append(Literal(r.choice(_TEXTS)))
            elif kind == 2:
                items.append(Literal(self.number()))
            elif kind == 3:
                a, b = sorted([self.number(), self.number()])
                items.append(Range(a, b))
            else:
                items.append(Comparison(r.choice(list(CompareOp)), self.number()))
        return ValueConstraint(tuple(items))

    def role(self, var: str, object_kind: bool = True) -> RoleDecl:
        r = self.r
        kind = RoleKind.OBJECT if (object_kind and r.random() < 0.3) else RoleKind.OBJECT_TYPE
        name = self.qi() if r.random() < 0.2 else None
        vc = self.constraint() if r.random() < 0.25 else None
        return RoleDecl(var, self.qi(), kind, name, vc)

    def block(self, used_vars: set[str], earlier_fillers: set[ItemId], want_inst: bool) -> Block:
        r = self.r
        if used_vars and r.random() < 0.2:
            v1 = r.choice(sorted(used_vars))
        else:
            v1 = self.var(used_vars)
        v2 = self.var(used_vars | {v1})
        used_vars.update((v1, v2))
        pred = PredicateDecl(self.pi(), v1, v2)
        ra, rb = self.role(v1), self.role(v2)
        if r.random() < 0.3:
            ra, rb = rb, ra
        fillers = {ra.filler, rb.filler}
        functions = []
        for _ in range(r.choice([0, 0, 1, 2])):
            args = tuple(r.choice([ra.filler, rb.filler, self.qi()]) for _ in range(r.randint(1, 3)))
            functions.append(FunctionDecl(z(r.randint(1, 99999)), args,
                                          self.constraint() if r.random() < 0.2 else None))
        joins = []
        for _ in range(r.choice([0, 0, 1, 2])):
            if r.random() < 0.5:
                joins.append(JoinDecl(JoinKind.QQ, r.choice([ra.filler, rb.filler, self.qi()]), self.qi()))
            else:
                joins.append(JoinDecl(JoinKind.PP, r.choice([pred.pitem, self.pi()]), self.pi()))
        mand = [v for v in (v1, v2) if r.random() < 0.25]
        if r.random() < 0.3:
            mand.reverse()
        insts = []
        n_inst = r.choice([0, 0, 1, 2]) + (1 if want_inst else 0)
        for _ in range(n_inst):
            if r.random() < 0.85:
                t = r.choice(sorted(fillers))
            else:
                t = self.qi()
                if t in fillers or t in earlier_fillers:
                    t = r.choice(sorted(fillers))
            insts.append(Instantiation(t, self.qi()))
        return Block(pred, ra, rb, tuple(functions), tuple(joins), tuple(mand), tuple(insts))

    def constructor(self, name: str) -> Constructor:
        r = self.r
        kind = ConstructorKind.INSTANCE if r.random() < 0.4 else ConstructorKind.TYPE
        n = r.choice([1, 1, 2, 3])
        used: set[str] = set()
        earlier: set[ItemId] = set()
        blocks = []
        inst_at = r.randrange(n)
        for k in range(n):
            b = self.block(used, earlier, kind is ConstructorKind.INSTANCE and k == inst_at)
            if kind is ConstructorKind.TYPE and r.random() < 0.7:
                b = Block(b.predicate, b.role1, b.role2, b.functions, b.joins, b.mandatories, ())
            blocks.append(b)
            earlier |= b.fillers()
        return Constructor(kind, name, tuple(blocks))

    def model(self, max_decls: int = 4) -> Model:
        r = self.r
        decls = []
        names: list[str] = []
        for _ in range(r.randint(0, max_decls)):
            if names and r.random() < 0.3:
                a = r.choice(names)
                kind = r.choice(list(LinkKind))
                b = r.choice(names + [self.var(set(names))])
                if a == b and kind is not LinkKind.PART_OF:
                    b = self.var(set(names))
                decls.append(Link(kind, a, b))
            else:
                name = "C" + str(len(names) + 1) if r.random() < 0.5 else self.var(set(names))
                if name in names:
                    continue
                names.append(name)
                decls.append(self.constructor(name))
        return Model(tuple(decls))


def object_as_type(model: Model) -> Model:
    """Shorthand does not distinguish Object from ObjectType; project to ObjectType."""
    out = []
    for d in model.declarations:
        if isinstance(d, Constructor):
            blocks = []
            for b in d.blocks:
                roles = [RoleDecl(r.var, r.filler, RoleKind.OBJECT_TYPE, r.name, r.constraint) for r in b.roles]
                blocks.append(Block(b.predicate, roles[0], roles[1], b.functions, b.joins, b.mandatories,
                                    b.instantiations))
            d = Constructor(d.kind, d.name, tuple(blocks))
        out.append(d)
    return Model(tuple(out))


# small-world generators for evaluation tests: pools are tiny so that
# constructors and graphs actually overlap

EVAL_Q = [q(n) for n in range(1, 11)]
EVAL_P = [p(n) for n in range(1, 5)]
EVAL_LABELS = ["alpha", "beta", "gamma"]


def random_graph(seed: int, max_triples: int = 50) -> KnowledgeGraph:
    r = random.Random(seed)
    n = r.randint(0, max_triples)
    triples = set()
    preds = EVAL_P + [P31, P31, P279]
    while len(triples) < n:
        s = r.choice(EVAL_Q)
        pr = r.choice(preds)
        if pr == P279 and r.random() < 0.5:
            continue
        o = TextValue(r.choice(EVAL_LABELS)) if r.random() < 0.03 else r.choice(EVAL_Q)
        triples.add((s, pr, o))
    labels = {(it, "en"): r.choice(EVAL_LABELS) for it in EVAL_Q if r.random() < 0.4}
    values = {(it, r.choice(EVAL_P)): r.randint(0, 20) for it in EVAL_Q if r.random() < 0.4}
    return KnowledgeGraph(triples, labels, (), values)


def random_eval_constructor(seed: int, functions: bool = True) -> Constructor:
    r = random.Random(seed)
    kind = ConstructorKind.INSTANCE if r.random() < 0.35 else ConstructorKind.TYPE
    blocks = []
    n = r.choice([1, 1, 2, 3])
    inst_at = r.randrange(n)
    for k in range(n):
        v1, v2 = f"r{2 * k + 1}", f"r{2 * k + 2}"
        pi = r.choice(EVAL_P)
        roles = []
        for v in (v1, v2):
            vc = None
            if r.random() < 0.25:
                items = []
                for _ in range(r.randint(1, 2)):
                    c = r.randrange(4)
                    if c == 0:
                        items.append(Literal(r.choice(EVAL_Q)))
                    elif c == 1:
                        items.append(Literal(r.choice(EVAL_LABELS)))
                    elif c == 2:
                        a = r.randint(0, 20)
                        items.append(Range(a, a + r.randint(0, 10)))
                    else:
                        items.append(Comparison(r.choice(list(CompareOp)), r.randint(0, 20)))
                vc = ValueConstraint(tuple(items))
            roles.append(RoleDecl(v, r.choice(EVAL_Q), RoleKind.OBJECT_TYPE, None, vc))
        joins = []
        if r.random() < 0.3:
            joins.append(JoinDecl(JoinKind.QQ, r.choice([roles[0].filler, roles[1].filler]), r.choice(EVAL_Q)))
        if r.random() < 0.3:
            joins.append(JoinDecl(JoinKind.PP, pi, r.choice(EVAL_P)))
        if r.random() < 0.5:
            r.shuffle(joins)
        mand = tuple(v for v in (v1, v2) if r.random() < 0.2)
        insts = []
        if kind is ConstructorKind.INSTANCE and (k == inst_at or r.random() < 0.3):
            for _ in range(r.randint(1, 2)):
                insts.append(Instantiation(r.choice([roles[0].filler, roles[1].filler]), r.choice(EVAL_Q)))
        funcs = ()
        if functions and r.random() < 0.3:
            funcs = (FunctionDecl(z(12345), (roles[0].filler,)),)
        if r.random() < 0.3:
            roles.reverse()
        blocks.append(Block(PredicateDecl(pi, v1, v2), roles[0], roles[1], funcs, tuple(joins), mand,
                            tuple(insts)))
    return Constructor(kind, f"E{seed}", tuple(blocks))


def loosen(c: Constructor, seed: int) -> Constructor:
    """A random generalisation of ``c``: every step can only widen the selection."""
    from dataclasses import replace

    r = random.Random(seed)
    blocks = []
    for b in c.blocks:
        roles = []
        for role in b.roles:
            vc = role.constraint
            if vc is not None:
                choice = r.randrange(3)
                if choice == 0:
                    vc = None
                elif choice == 1:
                    vc = ValueConstraint(vc.items + (Literal(r.choice(EVAL_Q)),))
            roles.append(replace(role, constraint=vc))
        # instances of one type are alternatives, so a type keeps all of them or none
        kept = {t for t in dict.fromkeys(i.type_item for i in b.instantiations) if r.random() < 0.5}
        insts = tuple(i for i in b.instantiations if i.type_item in kept)
        if r.random() < 0.3:
            insts += tuple(Instantiation(i.type_item, r.choice(EVAL_Q)) for i in insts[:1])
        joins = b.joins
        if r.random() < 0.3:
            joins += (JoinDecl(JoinKind.QQ, r.choice(roles).filler, r.choice(EVAL_Q)),)
        if r.random() < 0.3:
            joins += (JoinDecl(JoinKind.PP, b.predicate.pitem, r.choice(EVAL_P)),)
        mand = tuple(v for v in b.mandatories if r.random() < 0.5)
        funcs = tuple(f for f in b.functions if r.random() < 0.5)
        blocks.append(Block(b.predicate, roles[0], roles[1], funcs, joins, mand, insts))
    if len(blocks) > 1 and r.random() < 0.3:
        del blocks[r.randrange(len(blocks))]
    kind = c.kind if any(b.instantiations for b in blocks) else ConstructorKind.TYPE
    return Constructor(kind, c.name + "_loose", tuple(blocks))
