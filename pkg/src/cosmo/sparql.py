"""Compile constructors to SPARQL, run them, and check them hermetically.

Each definition block becomes one group. Blocks holding a mandatory role are
plain (required) groups; the others are OPTIONAL, so missing data never
hides what is present. Role membership is the property path
``wdt:P31?/wdt:P279*``: zero steps covers punning, one instance-of step plus
any subclass-of steps covers typing, subclass-of steps alone cover classes.
Objects must be IRIs; literal values never fill a role.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from typing import Any

import requests

from .errors import HttpError, MalformedResults, SparqlTimeout, UnsupportedFeature
from .evaluate import effective_predicates, effective_types
from .graph import P31, P279, KnowledgeGraph
from .model import Comparison, Constructor, ItemId, Literal, Range, ValueConstraint
from .syntax.constraints import format_number

DEFAULT_USER_AGENT = "cosmo-constructor-tools/0.1 (content-selection constructor compiler; python-requests)"
_SAFE_VAR = re.compile(r"[A-Za-z0-9_]+\Z")


@dataclass(frozen=True)
class Prefixes:
    entity: str = "http://www.wikidata.org/entity/"
    direct: str = "http://www.wikidata.org/prop/direct/"
    rdfs: str = "http://www.w3.org/2000/01/rdf-schema#"
    instance_of: ItemId = P31
    subclass_of: ItemId = P279


@dataclass(frozen=True)
class CompileOptions:
    prefixes: Prefixes = Prefixes()
    lang: str = "en"


@dataclass
class BlockGroup:
    """Structured form of one block's graph pattern."""

    index: int
    optional: bool
    subject: str
    object: str
    predicates: list[ItemId]
    subject_types: list[ItemId]
    object_types: list[ItemId]
    values: dict[str, list[ItemId]] = field(default_factory=dict)
    filters: list[tuple[str, ValueConstraint]] = field(default_factory=list)


@dataclass
class CompiledQuery:
    text: str
    projection: list[tuple[str, int, str]]
    groups: list[BlockGroup]
    notes: list[str] = field(default_factory=list)


# compilation


def _var(k: int, role_var: str, slot: str) -> str:
    return f"b{k + 1}_{role_var}" if _SAFE_VAR.match(role_var) else f"b{k + 1}_{slot}"


def build_groups(c: Constructor) -> list[BlockGroup]:
    groups = []
    for k, b in enumerate(c.blocks):
        subj, obj = b.subject_role(), b.object_role()
        if subj is None or obj is None:
            raise UnsupportedFeature(f"block {k + 1} of {c.name} has roles that do not match its predicate")
        sv, ov = _var(k, subj.var, "s"), _var(k, obj.var, "o")
        if sv == ov:
            ov = f"b{k + 1}_o"
        g = BlockGroup(k, not b.mandatories, sv, ov, effective_predicates(b),
                       effective_types(b, subj), effective_types(b, obj))
        allowed: dict[ItemId, list[ItemId]] = {}
        for inst in b.instantiations:
            allowed.setdefault(inst.type_item, [])
            if inst.instance not in allowed[inst.type_item]:
                allowed[inst.type_item].append(inst.instance)
        for var, role in ((sv, subj), (ov, obj)):
            if role.filler in allowed:
                g.values[var] = allowed[role.filler]
            if role.constraint is not None:
                g.filters.append((var, role.constraint))
        groups.append(g)
    groups.sort(key=lambda g: (g.optional, g.index))
    return groups


class _Text:
    def __init__(self, opts: CompileOptions):
        self.opts = opts

    def q(self, it: ItemId) -> str:
        return f"wd:{it}"

    def p(self, it: ItemId) -> str:
        return f"wdt:{it}"

    def member(self, var: str, types: list[ItemId]) -> str:
        pre = self.opts.prefixes
        path = f"{self.p(pre.instance_of)}?/{self.p(pre.subclass_of)}*"
        pats = [f"?{var} {path} {self.q(t)} ." for t in types]
        if len(pats) == 1:
            return pats[0]
        return " UNION ".join("{ " + p + " }" for p in pats)

    def triple(self, g: BlockGroup) -> str:
        pats = [f"?{g.subject} {self.p(p)} ?{g.object} ." for p in g.predicates]
        if len(pats) == 1:
            return pats[0]
        return " UNION ".join("{ " + p + " }" for p in pats)

    def filter(self, var: str, vc: ValueConstraint) -> str:
        alts = []
        for n, it in enumerate(vc.items):
            if isinstance(it, Literal) and isinstance(it.value, ItemId):
                alts.append(f"?{var} = {self.q(it.value)}")
            elif isinstance(it, Literal) and isinstance(it.value, str):
                text = json.dumps(it.value, ensure_ascii=False)
                alts.append(f"EXISTS {{ ?{var} rdfs:label {text}@{self.opts.lang} }}")
            else:
                nv, np_ = f"?{var}_nv{n}", f"?{var}_np{n}"
                if isinstance(it, Range):
                    cond = f"{nv} >= {format_number(it.lo)} && {nv} <= {format_number(it.hi)}"
                elif isinstance(it, Comparison):
                    cond = f"{nv} {it.op.value} {format_number(it.bound)}"
                else:
                    cond = f"{nv} = {format_number(it.value)}"
                alts.append(f"EXISTS {{ ?{var} {np_} {nv} . FILTER(isNumeric({nv}) && {cond}) }}")
        return "FILTER(" + " || ".join(alts) + ")"

    def group(self, g: BlockGroup, c: Constructor) -> list[str]:
        b = c.blocks[g.index]
        lines = [f"# block {g.index + 1}: {b.predicate.pitem}({b.predicate.var1}, {b.predicate.var2})",
                 self.triple(g), f"FILTER(isIRI(?{g.object}))",
                 self.member(g.subject, g.subject_types), self.member(g.object, g.object_types)]
        for var, items in g.values.items():
            lines.append(f"VALUES ?{var} {{ {' '.join(self.q(i) for i in items)} }}")
        lines += [self.filter(var, vc) for var, vc in g.filters]
        return lines


def compile_constructor(c: Constructor, opts: CompileOptions | None = None) -> CompiledQuery:
    opts = opts or CompileOptions()
    groups = build_groups(c)
    t = _Text(opts)
    notes = [f"{f.zitem}({', '.join(map(str, f.args))}) is not compiled: functions are evaluated locally"
             for b in c.blocks for f in b.functions]
    projection = []
    for g in sorted(groups, key=lambda g: g.index):
        b = c.blocks[g.index]
        projection += [(g.subject, g.index, b.predicate.var1), (g.object, g.index, b.predicate.var2)]
    pre = opts.prefixes
    out = [f"# constructor {c.name}"]
    out += [f"# unsupported in SPARQL: {n}" for n in notes]
    out += [f"PREFIX wd: <{pre.entity}>", f"PREFIX wdt: <{pre.direct}>", f"PREFIX rdfs: <{pre.rdfs}>"]
    out.append("SELECT DISTINCT " + " ".join(f"?{v}" for v, _, _ in projection) + " WHERE {")
    for g in groups:
        body = t.group(g, c)
        head = "  OPTIONAL {" if g.optional else "  {"
        out.append(head)
        out += ["    " + ln for ln in body]
        out.append("  }")
    out.append("}")
    return CompiledQuery("\n".join(out) + "\n", projection, groups, notes)


# hermetic reference matcher


def _edge_index(g: KnowledgeGraph) -> dict[ItemId, dict[ItemId, set[ItemId]]]:
    out: dict[ItemId, dict[ItemId, set[ItemId]]] = {}
    for s, p, o in g.triples:
        if isinstance(o, ItemId):
            out.setdefault(p, {}).setdefault(s, set()).add(o)
    return out


def _path_targets(out_edges, node: ItemId, pre: Prefixes) -> set[ItemId]:
    """Nodes reachable by instance-of? followed by subclass-of*."""
    first = {node} | out_edges.get(pre.instance_of, {}).get(node, set())
    seen, stack = set(), list(first)
    sub = out_edges.get(pre.subclass_of, {})
    while stack:
        n = stack.pop()
        if n in seen:
            continue
        seen.add(n)
        stack.extend(sub.get(n, ()))
    return seen


def _filter_holds(g: KnowledgeGraph, value: ItemId, vc: ValueConstraint, lang: str) -> bool:
    for it in vc.items:
        if isinstance(it, Literal) and isinstance(it.value, ItemId):
            if value == it.value:
                return True
        elif isinstance(it, Literal) and isinstance(it.value, str):
            if g.labels.get((value, lang)) == it.value:
                return True
        else:
            nums = [v for (item, _p), v in g.values.items() if item == value]
            for v in nums:
                if isinstance(it, Range) and it.lo <= v <= it.hi:
                    return True
                if isinstance(it, Comparison) and it.op.holds(v, it.bound):
                    return True
                if isinstance(it, Literal) and v == it.value:
                    return True
    return False


def _group_rows(grp: BlockGroup, g: KnowledgeGraph, edges, opts: CompileOptions) -> list[dict[str, ItemId]]:
    pre = opts.prefixes
    rows = []
    seen = set()
    for p in grp.predicates:
        for s, pp, o in g.triples:
            if pp != p or not isinstance(o, ItemId):
                continue
            if not set(grp.subject_types) & _path_targets(edges, s, pre):
                continue
            if not set(grp.object_types) & _path_targets(edges, o, pre):
                continue
            row = {grp.subject: s, grp.object: o}
            if any(row[var] not in items for var, items in grp.values.items()):
                continue
            if not all(_filter_holds(g, row[var], vc, opts.lang) for var, vc in grp.filters):
                continue
            key = (s, o)
            if key not in seen:
                seen.add(key)
                rows.append(row)
    return sorted(rows, key=lambda r: (r[grp.subject], r[grp.object]))


def reference_match(q: CompiledQuery, g: KnowledgeGraph, opts: CompileOptions | None = None) -> list[dict]:
    """Evaluate the query's groups directly: required groups join, optional groups left-join."""
    opts = opts or CompileOptions()
    for grp in q.groups:
        if not isinstance(grp, BlockGroup):
            raise UnsupportedFeature(f"unknown group descriptor {grp!r}")
    edges = _edge_index(g)
    rows: list[dict] = [{}]
    for grp in q.groups:
        found = _group_rows(grp, g, edges, opts)
        if grp.optional and not found:
            continue
        rows = [{**r, **f} for r, f in itertools.product(rows, found)]
        if not rows:
            return []
    return rows


def block_projection(q: CompiledQuery, rows: list[dict]) -> dict[int, set[tuple[Any, Any]]]:
    """Per block, the set of (subject, object) pairs bound in ``rows``."""
    out: dict[int, set] = {grp.index: set() for grp in q.groups}
    for grp in q.groups:
        for r in rows:
            if grp.subject in r and grp.object in r:
                out[grp.index].add((r[grp.subject], r[grp.object]))
    return out


# endpoint client


@dataclass(frozen=True)
class EndpointConfig:
    url: str
    timeout_ms: int = 30_000
    user_agent: str = DEFAULT_USER_AGENT
    max_rows: int = 10_000
    post_threshold: int = 2_000

    def __post_init__(self):
        if self.timeout_ms <= 0 or self.max_rows <= 0:
            raise ValueError("timeout and max rows must be positive")
        if not re.match(r"https?://", self.url):
            raise ValueError(f"endpoint URL must be absolute http(s): {self.url!r}")


def _decode(term: dict, prefixes: Prefixes):
    kind, value = term.get("type"), term.get("value")
    if value is None:
        raise MalformedResults("binding without a value")
    if kind == "uri":
        for base in (prefixes.entity, prefixes.direct):
            if value.startswith(base):
                try:
                    return ItemId.parse(value[len(base):])
                except Exception:
                    break
        return value
    if kind in ("literal", "typed-literal"):
        dt = term.get("datatype", "")
        if dt.endswith(("#integer", "#int", "#long")):
            return int(value)
        if dt.endswith(("#decimal", "#double", "#float")):
            return float(value)
        return value
    if kind == "bnode":
        return "_:" + value
    raise MalformedResults(f"unknown term type {kind!r}")


def run_query(text: str, ep: EndpointConfig, prefixes: Prefixes | None = None) -> list[dict[str, Any]]:
    prefixes = prefixes or Prefixes()
    headers = {"Accept": "application/sparql-results+json", "User-Agent": ep.user_agent}
    timeout = ep.timeout_ms / 1000
    try:
        if len(text) > ep.post_threshold:
            resp = requests.post(ep.url, data={"query": text}, headers=headers, timeout=timeout)
        else:
            resp = requests.get(ep.url, params={"query": text}, headers=headers, timeout=timeout)
    except requests.Timeout as exc:
        raise SparqlTimeout(f"no answer from {ep.url} within {ep.timeout_ms} ms") from exc
    except requests.RequestException as exc:
        raise HttpError(f"cannot reach {ep.url} ({type(exc).__name__})") from exc
    if resp.status_code != 200:
        raise HttpError(f"{ep.url} answered HTTP {resp.status_code}", resp.status_code)
    try:
        data = resp.json()
        if "boolean" in data:
            return [{"boolean": bool(data["boolean"])}]
        bindings = data["results"]["bindings"]
        rows = []
        for b in bindings[: ep.max_rows]:
            rows.append({k: _decode(v, prefixes) for k, v in b.items()})
        return rows
    except (ValueError, KeyError, TypeError, AttributeError) as exc:
        raise MalformedResults(f"not SPARQL JSON results: {exc}") from exc


def execute(q: CompiledQuery, ep: EndpointConfig, prefixes: Prefixes | None = None) -> list[dict[str, Any]]:
    return run_query(q.text, ep, prefixes)


def endpoint_item_lookup(ep: EndpointConfig, prefixes: Prefixes | None = None):
    """Existence check for an item catalog backed by an endpoint."""
    prefixes = prefixes or Prefixes()

    def lookup(items: list[ItemId]) -> set[ItemId]:
        found: set[ItemId] = set()
        for start in range(0, len(items), 200):
            chunk = items[start:start + 200]
            values = " ".join(f"<{prefixes.entity}{it}>" for it in chunk)
            text = (f"SELECT DISTINCT ?x WHERE {{ VALUES ?x {{ {values} }} "
                    f"{{ ?x ?p ?o }} UNION {{ ?s ?p2 ?x }} }}")
            for row in run_query(text, ep, prefixes):
                if isinstance(row.get("x"), ItemId):
                    found.add(row["x"])
        return found

    return lookup
