"""Run constructors as content selections over a local knowledge graph.

Each definition block is evaluated on its own: the result is one tuple set
per block, not a single constructor extension.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any

from .errors import ArityMismatch, CosmoError, UnknownFunction, UnresolvedEndpoint
from .functions import FunctionRegistry, default_registry
from .graph import KnowledgeGraph
from .model import (
    Block,
    Comparison,
    Constructor,
    ItemId,
    JoinKind,
    Link,
    LinkKind,
    Literal,
    Model,
    Range,
    RoleDecl,
    ValueConstraint,
)


@dataclass(frozen=True, order=True)
class ReifiedId:
    """The domain object standing for one predicate tuple; injective by construction."""

    pitem: ItemId
    subject: ItemId
    object: ItemId

    def __str__(self) -> str:
        return f"ob({self.pitem},{self.subject},{self.object})"


@dataclass
class BlockResult:
    pitem: ItemId
    tuples: frozenset[tuple[ItemId, ItemId]]
    reified_ids: frozenset[ReifiedId]
    function_outputs: dict[ItemId, list[Any]] = field(default_factory=dict)

    def bindings(self, position: int) -> set[ItemId]:
        return {t[position] for t in self.tuples}


@dataclass
class SelectionResult:
    constructor: str
    blocks: list[BlockResult]
    realisable: bool
    problems: list[CosmoError] = field(default_factory=list)

    @property
    def reified_ids(self) -> frozenset[ReifiedId]:
        return frozenset().union(*(b.reified_ids for b in self.blocks)) if self.blocks else frozenset()


def effective_predicates(b: Block) -> list[ItemId]:
    out = [b.predicate.pitem]
    for j in b.joins:
        if j.kind is JoinKind.PP:
            other = j.partner(b.predicate.pitem)
            if other is not None and other not in out:
                out.append(other)
    return out


def effective_types(b: Block, role: RoleDecl) -> list[ItemId]:
    out = [role.filler]
    for j in b.joins:
        if j.kind is JoinKind.QQ:
            other = j.partner(role.filler)
            if other is not None and other not in out:
                out.append(other)
    return out


def _matches_number(item: Range | Comparison | Literal, nums: list[float]) -> bool:
    if isinstance(item, Range):
        return any(item.lo <= v <= item.hi for v in nums)
    if isinstance(item, Comparison):
        return any(item.op.holds(v, item.bound) for v in nums)
    return any(v == item.value for v in nums)


def satisfies(value: Any, vc: ValueConstraint | None, g: KnowledgeGraph, lang: str) -> bool:
    """OR over the constraint's items.

    Text compares with the item's label in ``lang``; a Q item means equality;
    numbers, ranges and comparisons look at the item's numeric values. Plain
    (non-item) values, such as function outputs, are compared directly.
    """
    if vc is None:
        return True
    for it in vc.items:
        if isinstance(it, Literal) and isinstance(it.value, ItemId):
            if value == it.value:
                return True
        elif isinstance(it, Literal) and isinstance(it.value, str):
            text = g.label(value, lang) if isinstance(value, ItemId) else value
            if text == it.value:
                return True
        else:
            if isinstance(value, ItemId):
                nums = g.numbers(value)
            elif isinstance(value, (int, float)) and not isinstance(value, bool):
                nums = [value]
            else:
                nums = []
            if _matches_number(it, nums):
                return True
    return False


def block_tuples(b: Block, g: KnowledgeGraph, lang: str = "en") -> frozenset[tuple[ItemId, ItemId]]:
    subj, obj = b.subject_role(), b.object_role()
    if subj is None or obj is None:
        return frozenset()
    s_types, o_types = effective_types(b, subj), effective_types(b, obj)
    allowed: dict[ItemId, set[ItemId]] = {}
    for inst in b.instantiations:
        allowed.setdefault(inst.type_item, set()).add(inst.instance)
    out = set()
    for p in effective_predicates(b):
        for s, o in g.extension(p):
            if not isinstance(o, ItemId):
                continue
            if not any(g.member_of(s, t) for t in s_types) or not any(g.member_of(o, t) for t in o_types):
                continue
            if not satisfies(s, subj.constraint, g, lang) or not satisfies(o, obj.constraint, g, lang):
                continue
            if subj.filler in allowed and s not in allowed[subj.filler]:
                continue
            if obj.filler in allowed and o not in allowed[obj.filler]:
                continue
            out.add((s, o))
    return frozenset(out)


def _function_outputs(b: Block, tuples: frozenset, g: KnowledgeGraph, fr: FunctionRegistry, lang: str,
                      problems: list[CosmoError]) -> dict[ItemId, list[Any]]:
    subj, obj = b.subject_role(), b.object_role()
    outputs: dict[ItemId, list[Any]] = {}
    for f in b.functions:
        if f.zitem not in fr:
            problems.append(UnknownFunction(f"no implementation registered for {f.zitem}"))
            continue
        if fr.arities[f.zitem] != len(f.args):
            problems.append(ArityMismatch(f"{f.zitem} takes {fr.arities[f.zitem]} argument(s), "
                                          f"declared with {len(f.args)}"))
            continue
        pools = []
        for a in f.args:
            pool: set[ItemId] = set()
            if subj is not None and subj.filler == a:
                pool |= {t[0] for t in tuples}
            if obj is not None and obj.filler == a:
                pool |= {t[1] for t in tuples}
            is_filler = a in b.fillers()
            pools.append(sorted(pool) if is_filler else [a])
        values = []
        for args in itertools.product(*pools):
            v = fr.apply(f.zitem, g, list(args))
            if v is not None and satisfies(v, f.constraint, g, lang):
                values.append(v)
        outputs.setdefault(f.zitem, []).extend(values)
    return outputs


def eval_block(b: Block, g: KnowledgeGraph, fr: FunctionRegistry | None = None, lang: str = "en",
               problems: list[CosmoError] | None = None) -> BlockResult:
    fr = fr if fr is not None else default_registry()
    problems = problems if problems is not None else []
    tuples = block_tuples(b, g, lang)
    ids = frozenset(ReifiedId(b.predicate.pitem, s, o) for s, o in tuples)
    return BlockResult(b.predicate.pitem, tuples, ids, _function_outputs(b, tuples, g, fr, lang, problems))


def eval_constructor(c: Constructor, g: KnowledgeGraph, fr: FunctionRegistry | None = None,
                     lang: str = "en") -> SelectionResult:
    fr = fr if fr is not None else default_registry()
    problems: list[CosmoError] = []
    blocks = [eval_block(b, g, fr, lang, problems) for b in c.blocks]
    realisable = all(res.tuples for b, res in zip(c.blocks, blocks) if b.mandatories)
    return SelectionResult(c.name, blocks, realisable, problems)


def check_link(link: Link, model: Model, g: KnowledgeGraph, fr: FunctionRegistry | None = None,
               lang: str = "en") -> bool:
    """Does the link hold on this graph?

    SubConstructorOf and InstanceOf hold when the source's reified ids are a
    subset of the target's. PartOf holds when the subject of every source
    tuple is a proper part of the subject of some target tuple.
    """
    try:
        src, dst = model.constructor(link.source), model.constructor(link.target)
    except KeyError as exc:
        raise UnresolvedEndpoint(f"{link.kind.value} refers to undeclared constructor {exc.args[0]!r}") from None
    a = eval_constructor(src, g, fr, lang).reified_ids
    b = eval_constructor(dst, g, fr, lang).reified_ids
    if link.kind is LinkKind.PART_OF:
        wholes = {r.subject for r in b}
        return all(any(g.is_proper_part(r.subject, w) for w in wholes) for r in a)
    return a <= b
