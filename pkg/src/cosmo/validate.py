"""Static semantic checks over parsed or hand-built models.

Rule ids are stable: VR01..VR12 are the core rules, VR13 and VR14 are
advisory (info and warning).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable

from .model import (
    Constructor,
    ConstructorKind,
    ItemId,
    JoinKind,
    Link,
    LinkKind,
    Model,
)


class FindingSeverity(enum.Enum):
    ERROR = "error"
    WARNING = "warning"
    INFO = "info"


@dataclass(frozen=True)
class Finding:
    rule_id: str
    severity: FindingSeverity
    declaration: int
    path: str
    message: str

    def __str__(self) -> str:
        where = f"declaration {self.declaration}" + (f" {self.path}" if self.path else "")
        return f"{self.rule_id} {self.severity.value}: {where}: {self.message}"


@dataclass
class ValidationReport:
    findings: list[Finding] = field(default_factory=list)

    @property
    def errors(self) -> list[Finding]:
        return [f for f in self.findings if f.severity is FindingSeverity.ERROR]

    @property
    def ok(self) -> bool:
        """No error-severity findings (warnings and info do not block)."""
        return not self.errors

    def rule_ids(self) -> list[str]:
        return [f.rule_id for f in self.findings]

    def __bool__(self) -> bool:
        return bool(self.findings)


class CatalogSource(enum.Enum):
    FILE = "file"
    ENDPOINT = "endpoint"
    OPEN_WORLD = "open-world"


@dataclass
class ItemCatalog:
    known_q: set[ItemId] = field(default_factory=set)
    known_p: set[ItemId] = field(default_factory=set)
    known_z: set[ItemId] = field(default_factory=set)
    source: CatalogSource = CatalogSource.OPEN_WORLD
    # endpoint mode: batch existence check, returns the subset that exists
    lookup: Callable[[list[ItemId]], set[ItemId]] | None = None

    @classmethod
    def open_world(cls) -> ItemCatalog:
        return cls()

    @classmethod
    def from_items(cls, items: Iterable[ItemId], source: CatalogSource = CatalogSource.FILE) -> ItemCatalog:
        cat = cls(source=source)
        for it in items:
            cat.add(it)
        return cat

    @classmethod
    def from_file(cls, path: str | Path) -> ItemCatalog:
        return cls.from_items(parse_catalog(Path(path).read_text(encoding="utf-8")))

    @classmethod
    def from_endpoint(cls, lookup: Callable[[list[ItemId]], set[ItemId]]) -> ItemCatalog:
        return cls(source=CatalogSource.ENDPOINT, lookup=lookup)

    def add(self, it: ItemId):
        {"Q": self.known_q, "P": self.known_p, "Z": self.known_z}[it.kind.value].add(it)

    def __contains__(self, it: ItemId) -> bool:
        if self.source is CatalogSource.OPEN_WORLD:
            return True
        return it in self.known_q or it in self.known_p or it in self.known_z

    def resolve(self, items: list[ItemId]):
        """Endpoint mode: ask the endpoint about items not yet known."""
        if self.source is not CatalogSource.ENDPOINT or self.lookup is None:
            return
        pending = [it for it in items if it not in self]
        if pending:
            for it in self.lookup(pending):
                self.add(it)


def parse_catalog(text: str) -> list[ItemId]:
    items = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            items.append(ItemId.parse(line))
    return items


def _first_occurrences(model: Model) -> list[ItemId]:
    seen, out = set(), []
    for it in model.items():
        if it not in seen:
            seen.add(it)
            out.append(it)
    return out


def check_against_catalog(model: Model, catalog: ItemCatalog) -> list[ItemId]:
    items = _first_occurrences(model)
    catalog.resolve(items)
    return [it for it in items if it not in catalog]


def _cycle_members(edges: list[tuple[str, str]]) -> set[str]:
    graph: dict[str, list[str]] = {}
    for a, b in edges:
        graph.setdefault(a, []).append(b)
    on_cycle: set[str] = set()
    for start in graph:
        stack, seen = list(graph[start]), set()
        while stack:
            n = stack.pop()
            if n == start:
                on_cycle.add(start)
                break
            if n in seen:
                continue
            seen.add(n)
            stack.extend(graph.get(n, ()))
    return on_cycle


class _Checker:
    def __init__(self, model: Model, catalog: ItemCatalog):
        self.model = model
        self.catalog = catalog
        self.findings: list[Finding] = []

    def add(self, rule, severity, decl, path, message):
        self.findings.append(Finding(rule, severity, decl, path, message))

    def run(self) -> ValidationReport:
        E, _W = FindingSeverity.ERROR, FindingSeverity.WARNING
        kinds: dict[str, ConstructorKind] = {}
        for i, d in enumerate(self.model.declarations):
            if isinstance(d, Constructor):
                if d.name in kinds:
                    self.add("VR01", E, i, "", f"constructor name {d.name!r} is declared more than once")
                else:
                    kinds[d.name] = d.kind
        for i, d in enumerate(self.model.declarations):
            if isinstance(d, Constructor):
                self.constructor(i, d)
            else:
                self.link(i, d, kinds)
        self.cycles(LinkKind.SUB_CONSTRUCTOR_OF, "VR11")
        self.cycles(LinkKind.PART_OF, "VR12")
        if self.catalog.source is not CatalogSource.OPEN_WORLD:
            for it in check_against_catalog(self.model, self.catalog):
                decl = self.first_decl_with(it)
                self.add("VR09", E, decl, "", f"{it} is not in the item catalog; add it there first")
        self.findings.sort(key=lambda f: f.declaration)
        return ValidationReport(self.findings)

    def first_decl_with(self, it: ItemId) -> int:
        for i, d in enumerate(self.model.declarations):
            if isinstance(d, Constructor) and it in set(d.items()):
                return i
        return 0

    def link(self, i: int, link: Link, kinds: dict[str, ConstructorKind]):
        E, W = FindingSeverity.ERROR, FindingSeverity.WARNING
        missing = [n for n in (link.source, link.target) if n not in kinds]
        for n in missing:
            self.add("VR02", E, i, "", f"{link.kind.value} refers to undeclared constructor {n!r}")
        if missing:
            return
        src, dst = kinds[link.source], kinds[link.target]
        if link.kind is LinkKind.INSTANCE_OF:
            if src is not ConstructorKind.INSTANCE or dst is not ConstructorKind.TYPE:
                self.add("VR03", W, i, "", f"InstanceOf({link.source}, {link.target}) should link an "
                                           f"instance constructor to a type constructor")
        elif link.kind is LinkKind.SUB_CONSTRUCTOR_OF and src is not dst:
            self.add("VR04", E, i, "", f"SubConstructorOf({link.source}, {link.target}) mixes a "
                                       f"{src.value} with a {dst.value}")

    def cycles(self, kind: LinkKind, rule: str):
        edges = [(ln.source, ln.target) for ln in self.model.links if ln.kind is kind]
        bad = _cycle_members(edges)
        if not bad:
            return
        for i, d in enumerate(self.model.declarations):
            if isinstance(d, Link) and d.kind is kind and d.source in bad and d.target in bad:
                self.add(rule, FindingSeverity.ERROR, i, "",
                         f"{kind.value} links form a cycle through {d.source!r} and {d.target!r}")
                return

    def constructor(self, i: int, c: Constructor):
        E, W, I = FindingSeverity.ERROR, FindingSeverity.WARNING, FindingSeverity.INFO
        for k, b in enumerate(c.blocks):
            at = f"blocks[{k}]"
            p = b.predicate
            role_vars = [b.role1.var, b.role2.var]
            if p.var1 == p.var2 or sorted(role_vars) != sorted([p.var1, p.var2]):
                self.add("VR05", E, i, at, f"roles {role_vars} do not match {p.pitem}({p.var1},{p.var2})")
            for v in b.mandatories:
                if v not in role_vars:
                    self.add("VR06", E, i, at, f"mandatory {v!r} is not a role of {p.pitem}")
            fillers = b.fillers()
            for inst in b.instantiations:
                if inst.type_item not in fillers:
                    self.add("VR07", W, i, at, f"instantiated type {inst.type_item} is not a role filler "
                                               f"of this block")
            for j in b.joins:
                if not j.homogeneous:
                    self.add("VR08", E, i, at, f"join mixes item kinds: {j.left}, {j.right}")
                    continue
                present = {p.pitem} if j.kind is JoinKind.PP else fillers
                if j.left not in present and j.right not in present:
                    self.add("VR14", W, i, at, f"join of {j.left} and {j.right} names neither the "
                                               f"block's predicate nor a filler; it has no effect")
        insts = c.instantiations()
        if c.is_instance and not insts:
            self.add("VR10", E, i, "", f"instance constructor {c.name!r} has no instantiation")
        if not c.is_instance and insts:
            self.add("VR13", I, i, "", f"type constructor {c.name!r} carries instantiations")


def validate(model: Model, catalog: ItemCatalog | None = None) -> ValidationReport:
    return _Checker(model, catalog or ItemCatalog.open_world()).run()
