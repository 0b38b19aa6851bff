"""Local stand-ins for Wikifunctions.

A registry maps Z items to native callables ``fn(graph, args) -> value | None``.
Implementations must be pure. A manifest file binds Z items to built-ins,
one ``zitem arity builtin`` per line.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Callable

from .errors import ArityMismatch, FormatError, UnknownFunction
from .graph import KnowledgeGraph
from .model import ItemId

P569 = ItemId.parse("P569")  # date of birth, stored as a year in value records
DEFAULT_REFERENCE_YEAR = 2024

Impl = Callable[[KnowledgeGraph, list[Any]], Any]


def make_age(reference_year: int = DEFAULT_REFERENCE_YEAR) -> Impl:
    def age(graph: KnowledgeGraph, args: list[Any]):
        born = graph.value(args[0], P569) if isinstance(args[0], ItemId) else None
        return None if born is None else reference_year - int(born)

    return age


def identity(graph: KnowledgeGraph, args: list[Any]):
    return args[0]


def statement_count(graph: KnowledgeGraph, args: list[Any]):
    return graph.subjects_with(args[0]) if isinstance(args[0], ItemId) else 0


BUILTINS: dict[str, Callable[[], Impl]] = {
    "age": make_age,
    "identity": lambda: identity,
    "statement_count": lambda: statement_count,
}


@dataclass
class FunctionRegistry:
    impls: dict[ItemId, Impl] = field(default_factory=dict)
    arities: dict[ItemId, int] = field(default_factory=dict)

    def register(self, zitem: ItemId, arity: int, impl: Impl):
        if not zitem.is_z:
            raise ValueError(f"functions are registered under Z items, got {zitem}")
        self.impls[zitem] = impl
        self.arities[zitem] = arity

    def __contains__(self, zitem: ItemId) -> bool:
        return zitem in self.impls

    def apply(self, zitem: ItemId, graph: KnowledgeGraph, args: list[Any]):
        if zitem not in self.impls:
            raise UnknownFunction(f"no implementation registered for {zitem}")
        if len(args) != self.arities[zitem]:
            raise ArityMismatch(f"{zitem} takes {self.arities[zitem]} argument(s), got {len(args)}")
        return self.impls[zitem](graph, list(args))


def parse_manifest(text: str, reference_year: int = DEFAULT_REFERENCE_YEAR) -> FunctionRegistry:
    reg = FunctionRegistry()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        fields = raw.split("#", 1)[0].split()
        if not fields:
            continue
        if len(fields) != 3:
            raise FormatError("manifest lines are: <zitem> <arity> <builtin>", lineno)
        z, arity, name = fields
        try:
            zitem = ItemId.parse(z)
            n = int(arity)
        except (ValueError, Exception) as exc:
            raise FormatError(str(exc), lineno) from None
        if not zitem.is_z or n < 1:
            raise FormatError(f"expected a Z item and a positive arity, got {z} {arity}", lineno)
        if name not in BUILTINS:
            raise FormatError(f"unknown built-in {name!r} (have: {', '.join(sorted(BUILTINS))})", lineno)
        impl = make_age(reference_year) if name == "age" else BUILTINS[name]()
        reg.register(zitem, n, impl)
    return reg


def load_manifest(path: str | Path, reference_year: int = DEFAULT_REFERENCE_YEAR) -> FunctionRegistry:
    return parse_manifest(Path(path).read_text(encoding="utf-8"), reference_year)


def default_registry() -> FunctionRegistry:
    text = resources.files("cosmo.data").joinpath("functions.txt").read_text(encoding="utf-8")
    return parse_manifest(text)
