"""A small in-memory knowledge graph and its line-based file format.

Records (whitespace separated, ``#`` starts a comment)::

    triple Q42 P31 Q5
    triple Q18844224 P2521 "autorka sci-fi"
    label Q18844224 cs "autorka sci-fi"
    partof Q1 Q2
    value Q42 P569 1952
"""

from __future__ import annotations

import re
import shlex
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Union

from .errors import CosmoError, FormatError, MereologyViolation
from .model import ItemId
from .syntax.constraints import format_number, number

_NUMBER_RE = re.compile(r"-?[0-9]+(?:\.[0-9]+)?\Z")

P31 = ItemId.parse("P31")
P279 = ItemId.parse("P279")


@dataclass(frozen=True)
class TextValue:
    """A string-valued triple object."""

    text: str

    def __str__(self) -> str:
        return '"' + self.text.replace("\\", "\\\\").replace('"', '\\"') + '"'


Node = Union[ItemId, TextValue]
Triple = tuple[ItemId, ItemId, Node]


def _closure(edges: Iterable[tuple[ItemId, ItemId]]) -> dict[ItemId, frozenset[ItemId]]:
    succ: dict[ItemId, set[ItemId]] = {}
    for a, b in edges:
        succ.setdefault(a, set()).add(b)
    out: dict[ItemId, frozenset[ItemId]] = {}
    for start in succ:
        seen: set[ItemId] = set()
        stack = list(succ[start])
        while stack:
            n = stack.pop()
            if n in seen:
                continue
            seen.add(n)
            stack.extend(succ.get(n, ()))
        out[start] = frozenset(seen)
    return out


class KnowledgeGraph:
    """Immutable after construction; safe to share between evaluations."""

    def __init__(self, triples: Iterable[Triple] = (), labels: dict[tuple[ItemId, str], str] | None = None,
                 partof: Iterable[tuple[ItemId, ItemId]] = (),
                 values: dict[tuple[ItemId, ItemId], float] | None = None):
        self.triples: frozenset[Triple] = frozenset(triples)
        for s, p, o in self.triples:
            if not p.is_p:
                raise CosmoError(f"triple predicate must be a P item, got {p}")
        self.labels = dict(labels or {})
        self.values = dict(values or {})
        self.partof_edges = frozenset(partof)
        self._partof = _closure(self.partof_edges)
        for a, ups in self._partof.items():
            if a in ups:
                raise MereologyViolation(f"part-of cycle through {a}: proper parthood must be irreflexive "
                                         f"and asymmetric")
        self.ppartof = frozenset((a, b) for a, ups in self._partof.items() for b in ups)
        self._by_pred: dict[ItemId, list[tuple[ItemId, Node]]] = {}
        for s, p, o in sorted(self.triples, key=_triple_key):
            self._by_pred.setdefault(p, []).append((s, o))
        self._types: dict[ItemId, set[ItemId]] = {}
        for s, o in self._by_pred.get(P31, ()):
            if isinstance(o, ItemId):
                self._types.setdefault(s, set()).add(o)
        self._supers = _closure((s, o) for s, o in self._by_pred.get(P279, ()) if isinstance(o, ItemId))
        self._numbers: dict[ItemId, list[float]] = {}
        for (it, _p), v in sorted(self.values.items(), key=lambda kv: (kv[0][0], kv[0][1])):
            self._numbers.setdefault(it, []).append(v)

    def __len__(self) -> int:
        return len(self.triples)

    def extension(self, p: ItemId) -> list[tuple[ItemId, Node]]:
        return self._by_pred.get(p, [])

    def superclasses(self, q: ItemId) -> frozenset[ItemId]:
        """P279+ ancestors of q."""
        return self._supers.get(q, frozenset())

    def member_of(self, x: Node, q: ItemId) -> bool:
        if not isinstance(x, ItemId):
            return False
        if x == q or q in self.superclasses(x):
            return True
        return any(y == q or q in self.superclasses(y) for y in self._types.get(x, ()))

    def label(self, it: ItemId, lang: str) -> str | None:
        return self.labels.get((it, lang))

    def numbers(self, it: ItemId) -> list[float]:
        return self._numbers.get(it, [])

    def value(self, it: ItemId, p: ItemId) -> float | None:
        return self.values.get((it, p))

    def proper_parts_of(self, whole: ItemId) -> set[ItemId]:
        return {a for a, b in self.ppartof if b == whole}

    def is_proper_part(self, part: ItemId, whole: ItemId) -> bool:
        return whole in self._partof.get(part, ())

    def subjects_with(self, it: ItemId) -> int:
        return sum(1 for s, _p, _o in self.triples if s == it)

    def items(self) -> set[ItemId]:
        out: set[ItemId] = set()
        for s, p, o in self.triples:
            out.update((s, p))
            if isinstance(o, ItemId):
                out.add(o)
        return out

    def to_text(self) -> str:
        lines = [f"triple {s} {p} {o}" for s, p, o in sorted(self.triples, key=_triple_key)]
        for (it, lang), text in sorted(self.labels.items(), key=lambda kv: (kv[0][0], kv[0][1])):
            lines.append(f"label {it} {lang} {TextValue(text)}")
        lines += [f"partof {a} {b}" for a, b in sorted(self.partof_edges)]
        for (it, p), v in sorted(self.values.items()):
            lines.append(f"value {it} {p} {format_number(v)}")
        return "\n".join(lines) + ("\n" if lines else "")


def _triple_key(t: Triple):
    s, p, o = t
    return (s, p, (0, o, "") if isinstance(o, ItemId) else (1, ItemId.parse("Q1"), o.text))


def _item(tok: str, line: int, want: str | None = None) -> ItemId:
    try:
        it = ItemId.parse(tok)
    except CosmoError:
        raise FormatError(f"not an item identifier: {tok!r}", line) from None
    if want is not None and it.kind.value != want:
        raise FormatError(f"expected a {want} item, got {tok}", line)
    return it


def parse_graph(text: str) -> KnowledgeGraph:
    triples, labels, partof, values = set(), {}, [], {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        try:
            fields = shlex.split(raw, comments=True, posix=True)
        except ValueError as exc:
            raise FormatError(str(exc), lineno) from None
        if not fields:
            continue
        kind, args = fields[0], fields[1:]
        hash_at = raw.find("#")
        quoted = '"' in raw and (hash_at < 0 or raw.index('"') < hash_at)
        if kind == "triple":
            if len(args) != 3:
                raise FormatError("triple needs subject, predicate and object", lineno)
            s, p = _item(args[0], lineno), _item(args[1], lineno, "P")
            if quoted:
                o: Node = TextValue(args[2])
            else:
                try:
                    o = ItemId.parse(args[2])
                except CosmoError:
                    raise FormatError(f"triple object must be an item or a quoted string, got {args[2]!r} "
                                      f"(numbers go in value records)", lineno) from None
            triples.add((s, p, o))
        elif kind == "label":
            if len(args) != 3 or not quoted:
                raise FormatError('label needs: label <item> <lang> "<text>"', lineno)
            labels[(_item(args[0], lineno), args[1])] = args[2]
        elif kind == "partof":
            if len(args) != 2:
                raise FormatError("partof needs two items", lineno)
            partof.append((_item(args[0], lineno), _item(args[1], lineno)))
        elif kind == "value":
            if len(args) != 3:
                raise FormatError("value needs: value <item> <pred> <number>", lineno)
            if not _NUMBER_RE.match(args[2]):
                raise FormatError(f"not a number: {args[2]!r}", lineno)
            v = number(args[2])
            values[(_item(args[0], lineno), _item(args[1], lineno, "P"))] = v
        else:
            raise FormatError(f"unknown record {kind!r} (expected triple, label, partof or value)", lineno)
    return KnowledgeGraph(triples, labels, partof, values)


def load_graph(path: str | Path) -> KnowledgeGraph:
    return parse_graph(Path(path).read_text(encoding="utf-8"))


def example_graph() -> KnowledgeGraph:
    """The Douglas Adams fragment shipped with the package."""
    from importlib import resources

    return parse_graph(resources.files("cosmo.data").joinpath("example1.graph").read_text(encoding="utf-8"))


def member_of(x: Node, q: ItemId, g: KnowledgeGraph) -> bool:
    return g.member_of(x, q)
