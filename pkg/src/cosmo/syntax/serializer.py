"""Canonical text output for both notations."""

from __future__ import annotations

from .. import lexicon as L
from ..lexicon import Lexicon, default_lexicon
from ..model import (
    Block,
    Constructor,
    ConstructorKind,
    FunctionDecl,
    Instantiation,
    Link,
    LinkKind,
    Model,
    RoleDecl,
    RoleKind,
)
from .constraints import format_constraint
from .parser import SyntaxKind

INDENT = "   "

_LINK_IDS = {
    LinkKind.SUB_CONSTRUCTOR_OF: L.SUB_CONSTRUCTOR_OF,
    LinkKind.INSTANCE_OF: L.INSTANCE_OF,
    LinkKind.PART_OF: L.PART_OF,
}
_CONSTRUCTOR_IDS = {
    ConstructorKind.TYPE: L.TYPE_CONSTRUCTOR,
    ConstructorKind.INSTANCE: L.INSTANCE_CONSTRUCTOR,
}


def instantiation_layout(blocks: tuple[Block, ...]) -> list[list[Instantiation]]:
    """Where each block's instance selectors are written.

    Selectors of block k move to the end of the furthest later block j such
    that no block in k+1..j has the instantiated type as a filler; reading
    the text back attaches them to block k again.
    """
    out: list[list[Instantiation]] = [[] for _ in blocks]
    for k, b in enumerate(blocks):
        if not b.instantiations:
            continue
        types = {i.type_item for i in b.instantiations}
        j = k
        if types <= b.fillers():
            while j + 1 < len(blocks) and not (types & blocks[j + 1].fillers()):
                j += 1
        out[j].extend(b.instantiations)
    return out


class _Writer:
    def __init__(self, syntax: SyntaxKind, lang: str, lex: Lexicon):
        self.syntax = syntax
        self.lang = lang
        self.lex = lex

    def kw(self, cid) -> str:
        if self.syntax is SyntaxKind.SHORTHAND and cid in L.SHORTHAND_KEYWORDS:
            return L.SHORTHAND_KEYWORDS[cid]
        return self.lex.keyword(cid, self.lang)

    def link(self, link: Link) -> str:
        return f"{self.kw(_LINK_IDS[link.kind])}({link.source}, {link.target})"

    def role(self, r: RoleDecl) -> str:
        head = r.var + (f"[{r.name}]" if r.name is not None else "")
        if self.syntax is SyntaxKind.SHORTHAND:
            body = str(r.filler)
        else:
            cid = L.OBJECT if r.kind is RoleKind.OBJECT else L.OBJECT_TYPE
            body = f"{self.kw(cid)}({r.filler})"
        return f"{head}:{body}" + (format_constraint(r.constraint) if r.constraint else "")

    def function(self, f: FunctionDecl) -> str:
        tail = format_constraint(f.constraint) if f.constraint else ""
        if self.syntax is SyntaxKind.SHORTHAND:
            if len(f.args) == 1:
                return f"{f.args[0]}.{f.zitem}{tail}"
            return f"{f.zitem}({','.join(map(str, f.args))}){tail}"
        return f"{self.kw(L.FUNCTION)}({f.zitem}({','.join(map(str, f.args))})){tail}"

    def instantiation(self, i: Instantiation) -> str:
        if self.syntax is SyntaxKind.SHORTHAND:
            return f"{i.type_item}={{{i.instance}}}"
        return f"{self.kw(L.OBJECT_TYPE)}({i.type_item})={{{i.instance}}}"

    def block_items(self, b: Block, insts: list[Instantiation]) -> list[str]:
        p = b.predicate
        pred = f"{p.pitem}({p.var1},{p.var2})"
        if self.syntax is SyntaxKind.LONGFORM:
            pred = f"{self.kw(L.PROPERTY)}({pred})"
        items = [pred, self.role(b.role1), self.role(b.role2)]
        items += [self.function(f) for f in b.functions]
        items += [f"{self.kw(L.JOIN)}({j.left}, {j.right})" for j in b.joins]
        items += [f"{self.kw(L.IS_MANDATORY)}({v})" for v in b.mandatories]
        items += [self.instantiation(i) for i in insts]
        return items

    def constructor(self, c: Constructor) -> str:
        layout = instantiation_layout(c.blocks)
        head = f"{self.kw(_CONSTRUCTOR_IDS[c.kind])}:{c.name}("
        if self.syntax is SyntaxKind.SHORTHAND:
            lines = [", ".join(self.block_items(b, layout[k])) for k, b in enumerate(c.blocks)]
        else:
            lines = [it for k, b in enumerate(c.blocks) for it in self.block_items(b, layout[k])]
        text = head + "\n" + ",\n".join(INDENT + line for line in lines) + ")"
        if c.provenance:
            notes = "\n".join("// " + ln for ln in c.provenance.splitlines())
            text = notes + "\n" + text
        return text


def serialize(model: Model, syntax: SyntaxKind | str = SyntaxKind.LONGFORM, lang: str = "en",
              lex: Lexicon | None = None) -> str:
    """Render ``model`` canonically; declarations are separated by blank lines."""
    lex = lex or default_lexicon()
    syntax = SyntaxKind(syntax) if isinstance(syntax, str) else syntax
    if syntax is SyntaxKind.LONGFORM:
        lex._require_lang(lang)
    w = _Writer(syntax, lang, lex)
    parts = [w.constructor(d) if isinstance(d, Constructor) else w.link(d) for d in model.declarations]
    return "\n\n".join(parts) + "\n" if parts else ""
