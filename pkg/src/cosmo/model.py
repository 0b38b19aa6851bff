"""Language-agnostic abstract syntax of constructor models.

Every node is a frozen dataclass, so models compare structurally and can be
shared freely. Only local invariants (item kinds, ranges) are enforced at
construction time; block- and model-level rules are the parser's and the
validator's business, so that invalid models can still be built by hand and
reported on.
"""

from __future__ import annotations

import enum
import functools
import re
from dataclasses import dataclass, field
from typing import Union

from .errors import CsmOutOfRange, MalformedToken

CSM_MAX = 14

_ITEM_RE = re.compile(r"([QPZ])([0-9]+)\Z")
_CSM_RE = re.compile(r"CSM([0-9]{3})\Z")
_VAR_RE = re.compile(r"[^\W\d_][^\W_]*(?:_[^\W_]+)*\Z")


class ItemKind(enum.Enum):
    Q = "Q"
    P = "P"
    Z = "Z"


@functools.total_ordering
@dataclass(frozen=True)
class ItemId:
    kind: ItemKind
    number: int

    def __post_init__(self):
        if not isinstance(self.kind, ItemKind):
            object.__setattr__(self, "kind", ItemKind(self.kind))
        if self.number < 1:
            raise MalformedToken(f"item number must be positive: {self.kind.value}{self.number}")

    @classmethod
    def parse(cls, text: str) -> ItemId:
        m = _ITEM_RE.match(text)
        if not m or m.group(2).startswith("0"):
            raise MalformedToken(f"not an item identifier: {text!r}")
        return cls(ItemKind(m.group(1)), int(m.group(2)))

    @property
    def is_q(self) -> bool:
        return self.kind is ItemKind.Q

    @property
    def is_p(self) -> bool:
        return self.kind is ItemKind.P

    @property
    def is_z(self) -> bool:
        return self.kind is ItemKind.Z

    def __str__(self) -> str:
        return f"{self.kind.value}{self.number}"

    def __repr__(self) -> str:
        return f"ItemId({self})"

    def __lt__(self, other):
        if not isinstance(other, ItemId):
            return NotImplemented
        return (self.kind.value, self.number) < (other.kind.value, other.number)


def item(text: str) -> ItemId:
    """Shorthand for ``ItemId.parse``."""
    return ItemId.parse(text)


@dataclass(frozen=True, order=True)
class CsmId:
    number: int

    def __post_init__(self):
        if not 1 <= self.number <= CSM_MAX:
            raise CsmOutOfRange(f"CSM identifiers run from CSM001 to CSM{CSM_MAX:03d}, got {self.number}")

    @classmethod
    def parse(cls, text: str) -> CsmId:
        m = _CSM_RE.match(text)
        if not m:
            raise MalformedToken(f"not a CSM identifier: {text!r}")
        return cls(int(m.group(1)))

    def __str__(self) -> str:
        return f"CSM{self.number:03d}"

    def __repr__(self) -> str:
        return f"CsmId({self})"


class LocalVar(str):
    """A model-local variable name (constructor names and role variables)."""

    def __new__(cls, name: str):
        if not is_variable(name):
            raise MalformedToken(f"not a variable name: {name!r}")
        return super().__new__(cls, name)

    def __repr__(self) -> str:
        return f"LocalVar({str(self)!r})"


def is_variable(token: str) -> bool:
    if _ITEM_RE.match(token) or _CSM_RE.match(token):
        return False
    return bool(_VAR_RE.match(token))


def classify_identifier(token: str) -> ItemId | CsmId | LocalVar:
    if not token or any(ch.isspace() for ch in token):
        raise MalformedToken(f"identifier must be non-empty without whitespace: {token!r}")
    if _ITEM_RE.match(token):
        return ItemId.parse(token)
    if _CSM_RE.match(token):
        return CsmId.parse(token)
    if token[0].isdigit():
        raise MalformedToken(f"identifier starts with a digit: {token!r}")
    return LocalVar(token)


# value constraints


class CompareOp(enum.Enum):
    LT = "<"
    LE = "<="
    GT = ">"
    GE = ">="

    def holds(self, value: float, bound: float) -> bool:
        if self is CompareOp.LT:
            return value < bound
        if self is CompareOp.LE:
            return value <= bound
        if self is CompareOp.GT:
            return value > bound
        return value >= bound


Number = Union[int, float]


@dataclass(frozen=True)
class Literal:
    value: Union[str, ItemId, int, float]

    def __post_init__(self):
        if isinstance(self.value, bool) or not isinstance(self.value, (str, ItemId, int, float)):
            raise TypeError(f"not a constraint literal: {self.value!r}")


@dataclass(frozen=True)
class Range:
    lo: Number
    hi: Number

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty range {self.lo}..{self.hi}")


@dataclass(frozen=True)
class Comparison:
    op: CompareOp
    bound: Number


ValueItem = Union[Literal, Range, Comparison]


@dataclass(frozen=True)
class ValueConstraint:
    items: tuple[ValueItem, ...]

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        if not self.items:
            raise ValueError("a value constraint needs at least one item")


# definitions


class RoleKind(enum.Enum):
    OBJECT = "Object"
    OBJECT_TYPE = "ObjectType"


def _require(it: ItemId, kind: ItemKind, what: str):
    if not isinstance(it, ItemId) or it.kind is not kind:
        raise MalformedToken(f"{what} must be a {kind.value} item, got {it}")


@dataclass(frozen=True)
class RoleDecl:
    var: str
    filler: ItemId
    kind: RoleKind = RoleKind.OBJECT_TYPE
    name: ItemId | None = None
    constraint: ValueConstraint | None = None

    def __post_init__(self):
        _require(self.filler, ItemKind.Q, "role filler")
        if self.name is not None:
            _require(self.name, ItemKind.Q, "role name")


@dataclass(frozen=True)
class PredicateDecl:
    pitem: ItemId
    var1: str
    var2: str

    def __post_init__(self):
        _require(self.pitem, ItemKind.P, "predicate")


@dataclass(frozen=True)
class FunctionDecl:
    zitem: ItemId
    args: tuple[ItemId, ...]
    constraint: ValueConstraint | None = None

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        _require(self.zitem, ItemKind.Z, "function")
        if not self.args:
            raise ValueError("a function needs at least one argument")
        for a in self.args:
            _require(a, ItemKind.Q, "function argument")


class JoinKind(enum.Enum):
    QQ = "QQ"
    PP = "PP"


@dataclass(frozen=True)
class JoinDecl:
    kind: JoinKind
    left: ItemId
    right: ItemId

    @classmethod
    def of(cls, left: ItemId, right: ItemId) -> JoinDecl:
        kind = JoinKind.PP if left.is_p else JoinKind.QQ
        return cls(kind, left, right)

    @property
    def homogeneous(self) -> bool:
        want = ItemKind.Q if self.kind is JoinKind.QQ else ItemKind.P
        return self.left.kind is want and self.right.kind is want

    def names(self, it: ItemId) -> bool:
        return it == self.left or it == self.right

    def partner(self, it: ItemId) -> ItemId | None:
        if it == self.left:
            return self.right
        if it == self.right:
            return self.left
        return None


@dataclass(frozen=True)
class Instantiation:
    type_item: ItemId
    instance: ItemId

    def __post_init__(self):
        _require(self.type_item, ItemKind.Q, "instantiated type")
        _require(self.instance, ItemKind.Q, "instance")


@dataclass(frozen=True)
class Block:
    predicate: PredicateDecl
    role1: RoleDecl
    role2: RoleDecl
    functions: tuple[FunctionDecl, ...] = ()
    joins: tuple[JoinDecl, ...] = ()
    mandatories: tuple[str, ...] = ()
    instantiations: tuple[Instantiation, ...] = ()

    def __post_init__(self):
        for name in ("functions", "joins", "mandatories", "instantiations"):
            object.__setattr__(self, name, tuple(getattr(self, name)))

    @property
    def roles(self) -> tuple[RoleDecl, RoleDecl]:
        return (self.role1, self.role2)

    def role_for(self, var: str) -> RoleDecl | None:
        for r in self.roles:
            if r.var == var:
                return r
        return None

    def subject_role(self) -> RoleDecl | None:
        return self.role_for(self.predicate.var1)

    def object_role(self) -> RoleDecl | None:
        return self.role_for(self.predicate.var2)

    def fillers(self) -> set[ItemId]:
        return {self.role1.filler, self.role2.filler}

    def items(self):
        """Every ItemId mentioned in the block, in textual order."""
        yield self.predicate.pitem
        for r in self.roles:
            if r.name is not None:
                yield r.name
            yield r.filler
            yield from _constraint_items(r.constraint)
        for f in self.functions:
            yield f.zitem
            yield from f.args
            yield from _constraint_items(f.constraint)
        for j in self.joins:
            yield j.left
            yield j.right
        for inst in self.instantiations:
            yield inst.type_item
            yield inst.instance


def _constraint_items(vc: ValueConstraint | None):
    if vc is None:
        return
    for it in vc.items:
        if isinstance(it, Literal) and isinstance(it.value, ItemId):
            yield it.value


class ConstructorKind(enum.Enum):
    TYPE = "TypeConstructor"
    INSTANCE = "InstanceConstructor"


@dataclass(frozen=True)
class Constructor:
    kind: ConstructorKind
    name: str
    blocks: tuple[Block, ...]
    # free-text note (e.g. variable renaming done by merge); not part of equality
    provenance: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        if not self.blocks:
            raise ValueError(f"constructor {self.name} needs at least one definition block")

    @property
    def is_instance(self) -> bool:
        return self.kind is ConstructorKind.INSTANCE

    def instantiations(self) -> list[Instantiation]:
        return [i for b in self.blocks for i in b.instantiations]

    def role_vars(self) -> list[str]:
        out = []
        for b in self.blocks:
            for v in (b.predicate.var1, b.predicate.var2, b.role1.var, b.role2.var, *b.mandatories):
                if v not in out:
                    out.append(v)
        return out

    def items(self):
        for b in self.blocks:
            yield from b.items()


class LinkKind(enum.Enum):
    SUB_CONSTRUCTOR_OF = "SubConstructorOf"
    INSTANCE_OF = "InstanceOf"
    PART_OF = "PartOf"


@dataclass(frozen=True)
class Link:
    kind: LinkKind
    source: str
    target: str


Declaration = Union[Constructor, Link]


@dataclass(frozen=True)
class Model:
    declarations: tuple[Declaration, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "declarations", tuple(self.declarations))

    @property
    def constructors(self) -> list[Constructor]:
        return [d for d in self.declarations if isinstance(d, Constructor)]

    @property
    def links(self) -> list[Link]:
        return [d for d in self.declarations if isinstance(d, Link)]

    def constructor(self, name: str) -> Constructor:
        for c in self.constructors:
            if c.name == name:
                return c
        raise KeyError(name)

    def items(self):
        for c in self.constructors:
            yield from c.items()

    def __add__(self, other: Model) -> Model:
        return Model(self.declarations + other.declarations)


# plain-data dump used by the CLI's `parse` command


def _constraint_to_data(vc: ValueConstraint | None):
    if vc is None:
        return None
    out = []
    for it in vc.items:
        if isinstance(it, Range):
            out.append({"range": [it.lo, it.hi]})
        elif isinstance(it, Comparison):
            out.append({"compare": it.op.value, "bound": it.bound})
        elif isinstance(it.value, ItemId):
            out.append({"item": str(it.value)})
        elif isinstance(it.value, str):
            out.append({"text": it.value})
        else:
            out.append({"number": it.value})
    return out


def _role_to_data(r: RoleDecl) -> dict:
    return {
        "var": r.var,
        "kind": r.kind.value,
        "filler": str(r.filler),
        "name": str(r.name) if r.name else None,
        "constraint": _constraint_to_data(r.constraint),
    }


def to_data(model: Model) -> dict:
    decls = []
    for d in model.declarations:
        if isinstance(d, Link):
            decls.append({"link": d.kind.value, "from": d.source, "to": d.target})
            continue
        blocks = []
        for b in d.blocks:
            blocks.append({
                "predicate": {"item": str(b.predicate.pitem), "vars": [b.predicate.var1, b.predicate.var2]},
                "roles": [_role_to_data(b.role1), _role_to_data(b.role2)],
                "functions": [
                    {"item": str(f.zitem), "args": [str(a) for a in f.args],
                     "constraint": _constraint_to_data(f.constraint)}
                    for f in b.functions
                ],
                "joins": [{"kind": j.kind.value, "items": [str(j.left), str(j.right)]} for j in b.joins],
                "mandatory": list(b.mandatories),
                "instantiations": [{"type": str(i.type_item), "instance": str(i.instance)}
                                   for i in b.instantiations],
            })
        decls.append({"constructor": d.kind.value, "name": d.name, "blocks": blocks})
    return {"declarations": decls}
