"""First-order reading of models and a small formula renderer.

Constants are lowercased item ids (``q7566``); Q items, constructor names and
role variables are unary predicates; P items are binary predicates; Z items
are function symbols.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .model import (
    Block,
    Constructor,
    FunctionDecl,
    ItemId,
    JoinDecl,
    JoinKind,
    Link,
    LinkKind,
    Literal,
    Model,
)


class UnsupportedConstruct(Exception):
    pass


# terms


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class FuncTerm:
    name: str
    args: tuple[Term, ...]


Term = Union[Var, Const, FuncTerm]


# formulas


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple[Term, ...]


@dataclass(frozen=True)
class Equals:
    left: Term
    right: Term


@dataclass(frozen=True)
class Not:
    body: Formula


@dataclass(frozen=True)
class And:
    parts: tuple[Formula, ...]


@dataclass(frozen=True)
class Or:
    parts: tuple[Formula, ...]


@dataclass(frozen=True)
class Implies:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class ForAll:
    vars: tuple[str, ...]
    body: Formula


@dataclass(frozen=True)
class Exists:
    vars: tuple[str, ...]
    body: Formula


Formula = Union[Atom, Equals, Not, And, Or, Implies, Iff, ForAll, Exists]

_BINARY = (And, Or, Implies, Iff)


def conj(*parts: Formula) -> Formula:
    flat: list[Formula] = []
    for p in parts:
        flat.extend(p.parts if isinstance(p, And) else (p,))
    return flat[0] if len(flat) == 1 else And(tuple(flat))


def atom(pred: str, *args: Term) -> Atom:
    return Atom(pred, tuple(args))


def const(it: ItemId) -> Const:
    return Const(str(it).lower())


# rendering

_SYMBOLS = {
    "ascii": {"forall": "forall ", "exists": "exists ", "->": "->", "&": "&", "|": "|", "<->": "<->", "~": "~"},
    "unicode": {"forall": "∀", "exists": "∃", "->": "→", "&": "∧", "|": "∨", "<->": "↔", "~": "¬"},
}


def render_term(t: Term) -> str:
    if isinstance(t, FuncTerm):
        return f"{t.name}({', '.join(render_term(a) for a in t.args)})"
    return t.name


def render_formula(f: Formula, style: str = "ascii") -> str:
    """Render with fixed parenthesization.

    Connective operands that are themselves connectives are parenthesized,
    except the right operand of an implication (implication is
    right-associative and binds loosest after the biconditional).
    """
    sym = _SYMBOLS[style]

    def wrap(g: Formula, when: bool) -> str:
        text = go(g)
        return f"({text})" if when else text

    def go(g: Formula) -> str:
        if isinstance(g, Atom):
            return f"{g.pred}({', '.join(render_term(a) for a in g.args)})"
        if isinstance(g, Equals):
            return f"{render_term(g.left)} = {render_term(g.right)}"
        if isinstance(g, Not):
            return sym["~"] + wrap(g.body, isinstance(g.body, (_BINARY, Equals)))
        if isinstance(g, (And, Or)):
            op = f" {sym['&' if isinstance(g, And) else '|']} "
            return op.join(wrap(p, isinstance(p, _BINARY)) for p in g.parts)
        if isinstance(g, Implies):
            return (f"{wrap(g.left, isinstance(g.left, _BINARY))} {sym['->']} "
                    f"{wrap(g.right, isinstance(g.right, Iff))}")
        if isinstance(g, Iff):
            return (f"{wrap(g.left, isinstance(g.left, _BINARY))} {sym['<->']} "
                    f"{wrap(g.right, isinstance(g.right, _BINARY))}")
        if isinstance(g, (ForAll, Exists)):
            q = sym["forall" if isinstance(g, ForAll) else "exists"]
            return f"{q}{', '.join(g.vars)} ({go(g.body)})"
        raise TypeError(f"not a formula: {g!r}")

    return go(f)


# translation


@dataclass
class TheoryFragment:
    formulas: list[Formula] = field(default_factory=list)
    provenance: list[int] = field(default_factory=list)

    def add(self, f: Formula, decl: int):
        self.formulas.append(f)
        self.provenance.append(decl)

    def __add__(self, other: TheoryFragment) -> TheoryFragment:
        shift = max(self.provenance, default=-1) + 1
        out = TheoryFragment(list(self.formulas), list(self.provenance))
        for f, p in zip(other.formulas, other.provenance):
            out.add(f, p + shift if p >= 0 else p)
        return out

    def render(self, style: str = "ascii") -> list[str]:
        return [render_formula(f, style) for f in self.formulas]


def join_name(j: JoinDecl) -> str:
    return f"Join_{j.left}_{j.right}"


def qitem(it: ItemId) -> Formula:
    return atom("QItem", const(it))


def instantiation_formula(type_item: ItemId, instance: ItemId) -> Formula:
    return conj(qitem(type_item), qitem(instance), atom(str(type_item), const(instance)))


def predicate_formula(b: Block) -> Formula:
    p = b.predicate
    x, y = Var("x"), Var("y")
    body = Implies(atom(str(p.pitem), x, y), conj(atom(p.var1, x), atom(p.var2, y)))
    return conj(atom("PItem", const(p.pitem)), ForAll(("x", "y"), body))


def role_formula(var: str, filler: ItemId) -> Formula:
    x = Var("x")
    return ForAll(("x",), Implies(atom(var, x), atom(str(filler), x)))


def function_formula(f: FunctionDecl) -> Formula:
    z = const(f.zitem)
    has = Atom("Has", (z, *(const(a) for a in f.args), FuncTerm(str(f.zitem), (Var("o"),))))
    return conj(atom("ZItem", z), Exists(("o",), has))


def join_formula(j: JoinDecl) -> Formula:
    name = join_name(j)
    if j.kind is JoinKind.QQ:
        x = Var("x")
        return ForAll(("x",), Iff(atom(name, x), Or((atom(str(j.left), x), atom(str(j.right), x)))))
    x, y = Var("x"), Var("y")
    return ForAll(("x", "y"), Iff(atom(name, x, y), Or((atom(str(j.left), x, y), atom(str(j.right), x, y)))))


def link_formula(link: Link) -> Formula:
    x = Var("x")
    if link.kind is LinkKind.PART_OF:
        y = Var("y")
        return ForAll(("x",), Implies(atom(link.source, x),
                                      Exists(("y",), conj(atom(link.target, y), atom("PPartOf", x, y)))))
    return ForAll(("x",), Implies(atom(link.source, x), atom(link.target, x)))


def mereology_axioms() -> list[Formula]:
    x, y, z = Var("x"), Var("y"), Var("z")
    pp = lambda a, b: atom("PPartOf", a, b)  # noqa: E731
    return [
        ForAll(("x", "y", "z"), Implies(conj(pp(x, y), pp(y, z)), pp(x, z))),
        ForAll(("x",), Not(pp(x, x))),
        ForAll(("x", "y"), Implies(pp(x, y), Not(pp(y, x)))),
    ]


def constructor_formula(c: Constructor) -> Formula:
    """forall x (C(x) -> one existential per definition block)."""
    x = Var("x")
    parts = []
    for k, b in enumerate(c.blocks):
        y1, y2 = f"y{2 * k + 1}", f"y{2 * k + 2}"
        p = b.predicate
        body = [atom("Contains", x, const(p.pitem), Var(y1), Var(y2)),
                atom(str(p.pitem), Var(y1), Var(y2)),
                atom(p.var1, Var(y1)), atom(p.var2, Var(y2))]
        body += [instantiation_formula(i.type_item, i.instance) for i in b.instantiations]
        parts.append(Exists((y1, y2), conj(*body)))
    return ForAll(("x",), Implies(atom(c.name, x), conj(*parts)))


def block_formulas(b: Block) -> list[Formula]:
    out = [predicate_formula(b)]
    for r in b.roles:
        out.append(qitem(r.filler))
        if r.name is not None:
            out.append(qitem(r.name))
        if r.constraint is not None:
            out += [qitem(it.value) for it in r.constraint.items
                    if isinstance(it, Literal) and isinstance(it.value, ItemId)]
        out.append(role_formula(r.var, r.filler))
    for f in b.functions:
        out.append(function_formula(f))
        if f.constraint is not None:
            out += [qitem(it.value) for it in f.constraint.items
                    if isinstance(it, Literal) and isinstance(it.value, ItemId)]
    out += [join_formula(j) for j in b.joins]
    out += [instantiation_formula(i.type_item, i.instance) for i in b.instantiations]
    return out


def translate_declaration(d: Constructor | Link) -> list[Formula]:
    if isinstance(d, Link):
        return [link_formula(d)]
    out = [constructor_formula(d)]
    for b in d.blocks:
        for f in block_formulas(b):
            if f not in out:
                out.append(f)
    return out


def translate(model: Model) -> TheoryFragment:
    """Formulas per declaration in order; the mereology axioms (provenance -1)
    close the theory once when any PartOf link is present."""
    theory = TheoryFragment()
    for i, d in enumerate(model.declarations):
        for f in translate_declaration(d):
            theory.add(f, i)
    if any(ln.kind is LinkKind.PART_OF for ln in model.links):
        for f in mereology_axioms():
            theory.add(f, -1)
    return theory


def render_theory(theory: TheoryFragment, style: str = "ascii") -> str:
    lines, last = [], None
    for f, p in zip(theory.formulas, theory.provenance):
        if p != last:
            lines.append("# mereology axioms" if p < 0 else f"# declaration {p}")
            last = p
        lines.append(render_formula(f, style))
    return "\n".join(lines) + ("\n" if lines else "")
