"""Constructor transformations: generalise, instantiate, merge, subsumption."""

from __future__ import annotations

from dataclasses import replace
from typing import Mapping

from .errors import AlreadyType, EmptyBindings, NotATypeConstructor, UnboundType
from .evaluate import effective_predicates, effective_types
from .model import (
    Block,
    Constructor,
    ConstructorKind,
    Instantiation,
    ItemId,
    PredicateDecl,
    RoleDecl,
)

BindingSet = Mapping[ItemId, ItemId]


def generalize(c: Constructor) -> Constructor:
    """Drop every instance selector; the result is a type constructor named ``<name>_gen``."""
    if not c.is_instance:
        raise AlreadyType(f"{c.name} is already a type constructor")
    blocks = tuple(replace(b, instantiations=()) for b in c.blocks)
    return Constructor(ConstructorKind.TYPE, f"{c.name}_gen", blocks)


def instantiate(c: Constructor, bindings: BindingSet) -> Constructor:
    """Pin role types to instances; each binding lands on every block where its type is a filler."""
    if c.is_instance:
        raise NotATypeConstructor(f"{c.name} is an instance constructor")
    if not bindings:
        raise EmptyBindings("instantiate needs at least one type=instance binding")
    fillers = set().union(*(b.fillers() for b in c.blocks))
    for t in bindings:
        if t not in fillers:
            raise UnboundType(f"{t} is not a role filler of {c.name}")
    blocks = []
    for b in c.blocks:
        extra = tuple(Instantiation(t, i) for t, i in bindings.items() if t in b.fillers())
        blocks.append(replace(b, instantiations=b.instantiations + extra))
    return Constructor(ConstructorKind.INSTANCE, f"{c.name}_inst", tuple(blocks))


def _fresh(var: str, taken: set[str]) -> str:
    n = 2
    while f"{var}_{n}" in taken:
        n += 1
    return f"{var}_{n}"


def _rename_block(b: Block, ren: dict[str, str]) -> Block:
    r = lambda v: ren.get(v, v)  # noqa: E731
    p = b.predicate
    return replace(
        b,
        predicate=PredicateDecl(p.pitem, r(p.var1), r(p.var2)),
        role1=replace(b.role1, var=r(b.role1.var)),
        role2=replace(b.role2, var=r(b.role2.var)),
        mandatories=tuple(r(v) for v in b.mandatories),
    )


def merge(c1: Constructor, c2: Constructor, new_name: str | None = None) -> Constructor:
    """Concatenate blocks (c1 first), renaming c2's role variables that clash with c1's."""
    taken = set(c1.role_vars())
    ren: dict[str, str] = {}
    for v in c2.role_vars():
        if v in taken:
            ren[v] = _fresh(v, taken | set(c2.role_vars()) | set(ren.values()))
        taken.add(ren.get(v, v))
    blocks = c1.blocks + tuple(_rename_block(b, ren) for b in c2.blocks)
    kind = ConstructorKind.INSTANCE if (c1.is_instance or c2.is_instance) else ConstructorKind.TYPE
    note = f"merged from {c1.name} and {c2.name}"
    if ren:
        note += "; renamed " + ", ".join(f"{a}->{b}" for a, b in ren.items())
    return Constructor(kind, new_name or f"{c1.name}_merge", blocks, provenance=note)


# structural subsumption


def _closure(table: Mapping[ItemId, set[ItemId]] | None) -> dict[ItemId, set[ItemId]]:
    out: dict[ItemId, set[ItemId]] = {}
    if not table:
        return out
    for start in table:
        seen, stack = set(), list(table[start])
        while stack:
            n = stack.pop()
            if n not in seen:
                seen.add(n)
                stack.extend(table.get(n, ()))
        out[start] = seen
    return out


def _roles_by_position(b: Block) -> tuple[RoleDecl | None, RoleDecl | None]:
    return b.subject_role(), b.object_role()


def block_subsumes(g: Block, s: Block, supers: dict[ItemId, set[ItemId]]) -> bool:
    """True when block g selects at least what block s selects (sufficient, not necessary)."""
    if not set(effective_predicates(s)) <= set(effective_predicates(g)):
        return False
    narrower = lambda a, b: a == b or b in supers.get(a, ())  # noqa: E731
    g_roles, s_roles = _roles_by_position(g), _roles_by_position(s)
    if None in g_roles or None in s_roles:
        return False
    g_allowed: dict[ItemId, set[ItemId]] = {}
    for i in g.instantiations:
        g_allowed.setdefault(i.type_item, set()).add(i.instance)
    s_allowed: dict[ItemId, set[ItemId]] = {}
    for i in s.instantiations:
        s_allowed.setdefault(i.type_item, set()).add(i.instance)
    for gr, sr in zip(g_roles, s_roles):
        g_types = effective_types(g, gr)
        if not all(any(narrower(t, u) for u in g_types) for t in effective_types(s, sr)):
            return False
        if gr.constraint is not None:
            if sr.constraint is None or not set(sr.constraint.items) <= set(gr.constraint.items):
                return False
        if gr.filler in g_allowed:
            if sr.filler != gr.filler or sr.filler not in s_allowed:
                return False
            if not s_allowed[sr.filler] <= g_allowed[gr.filler]:
                return False
    if not set(g.functions) <= set(s.functions):
        return False
    g_pos = _mandatory_positions(g)
    if not g_pos <= _mandatory_positions(s):
        return False
    return True


def _mandatory_positions(b: Block) -> set[int]:
    p = b.predicate
    return {0 if v == p.var1 else 1 for v in b.mandatories if v in (p.var1, p.var2)}


def block_matching(general: Constructor, specific: Constructor,
                   subclass_table: Mapping[ItemId, set[ItemId]] | None = None) -> dict[int, int] | None:
    """For each block of ``general``, the first block of ``specific`` it subsumes; None if one has no match."""
    supers = _closure(subclass_table)
    out = {}
    for gi, gb in enumerate(general.blocks):
        for si, sb in enumerate(specific.blocks):
            if block_subsumes(gb, sb, supers):
                out[gi] = si
                break
        else:
            return None
    return out


def subsumes(general: Constructor, specific: Constructor,
             subclass_table: Mapping[ItemId, set[ItemId]] | None = None) -> bool:
    return block_matching(general, specific, subclass_table) is not None


__all__ = [
    "BindingSet",
    "block_matching",
    "block_subsumes",
    "generalize",
    "instantiate",
    "merge",
    "subsumes",
]
