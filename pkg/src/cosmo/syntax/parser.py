"""Recursive-descent parser for the longform and shorthand notations."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .. import lexicon as L
from ..errors import AmbiguousLanguage, CosmoError, GrammarViolation, ParseError, Undetectable
from ..lexicon import Lexicon, default_lexicon
from ..model import (
    Block,
    Constructor,
    ConstructorKind,
    CsmId,
    FunctionDecl,
    Instantiation,
    ItemId,
    ItemKind,
    JoinDecl,
    Link,
    LinkKind,
    Model,
    PredicateDecl,
    RoleDecl,
    RoleKind,
    ValueConstraint,
    is_variable,
)
from .constraints import ConstraintSyntaxError, parse_constraint, split_items
from .diagnostics import ParseDiagnostic, Severity
from .lexer import Tok, Token, tokenize


class SyntaxKind(Enum):
    LONGFORM = "long"
    SHORTHAND = "short"


AUTO = "auto"

_CONSTRUCTOR_KINDS = {
    L.TYPE_CONSTRUCTOR: ConstructorKind.TYPE,
    L.INSTANCE_CONSTRUCTOR: ConstructorKind.INSTANCE,
}
_LINK_KINDS = {
    L.SUB_CONSTRUCTOR_OF: LinkKind.SUB_CONSTRUCTOR_OF,
    L.INSTANCE_OF: LinkKind.INSTANCE_OF,
    L.PART_OF: LinkKind.PART_OF,
}
_DECLARATION_IDS = set(_CONSTRUCTOR_KINDS) | set(_LINK_KINDS)


@dataclass
class ParseResult:
    model: Model
    diagnostics: list[ParseDiagnostic] = field(default_factory=list)
    syntax: SyntaxKind | None = None
    lang: str | None = None

    @property
    def warnings(self) -> list[ParseDiagnostic]:
        return [d for d in self.diagnostics if d.severity is Severity.WARNING]


class _Fail(Exception):
    def __init__(self, diag: ParseDiagnostic, violation: bool = False):
        self.diag = diag
        self.violation = violation


@dataclass
class _BlockDraft:
    predicate: PredicateDecl
    start: Token
    roles: list[RoleDecl] = field(default_factory=list)
    functions: list[FunctionDecl] = field(default_factory=list)
    joins: list[tuple[JoinDecl, Token]] = field(default_factory=list)
    mandatories: list[tuple[str, Token]] = field(default_factory=list)
    instantiations: list[Instantiation] = field(default_factory=list)

    def fillers(self) -> set[ItemId]:
        return {r.filler for r in self.roles}


class _Parser:
    def __init__(self, tokens: list[Token], syntax: SyntaxKind, lang: str | None, lex: Lexicon):
        self.toks = tokens
        self.pos = 0
        self.syntax = syntax
        self.lang = lang
        self.lex = lex
        self.diagnostics: list[ParseDiagnostic] = []
        self.failed_violation_only = True

    # token helpers

    def peek(self, k: int = 0) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def next(self) -> Token:
        tok = self.peek()
        if tok.kind is not Tok.EOF:
            self.pos += 1
        return tok

    def span_of(self, tok: Token) -> tuple[int, int]:
        if tok.kind is Tok.EOF and self.pos > 0:
            prev = self.toks[self.pos - 1]
            return prev.span
        return tok.span

    def fail(self, tok: Token, message: str, expected=None, violation=False):
        raise _Fail(ParseDiagnostic(Severity.ERROR, self.span_of(tok), message,
                                    tuple(expected) if expected else None), violation)

    def warn(self, tok: Token, message: str):
        self.diagnostics.append(ParseDiagnostic(Severity.WARNING, self.span_of(tok), message))

    def expect(self, ch: str) -> Token:
        tok = self.peek()
        if not tok.is_punct(ch):
            self.fail(tok, f"expected '{ch}', found {tok.describe()}", [f"'{ch}'"])
        return self.next()

    def keyword(self, tok: Token) -> CsmId | None:
        if self.syntax is SyntaxKind.SHORTHAND:
            return L.SHORTHAND_LOOKUP.get(tok.text) if tok.kind is Tok.WORD else None
        if self.lang == L.PIVOT:
            if tok.kind is not Tok.CSM:
                return None
            try:
                return CsmId.parse(tok.text)
            except CosmoError as exc:
                self.fail(tok, str(exc))
        if tok.kind is not Tok.WORD:
            return None
        return self.lex.find(tok.text, self.lang)

    def take_keyword(self, want: CsmId | None = None) -> tuple[CsmId | None, Token]:
        tok = self.peek()
        cid = self.keyword(tok)
        if cid is None or (want is not None and cid != want):
            return None, tok
        if self.syntax is SyntaxKind.LONGFORM and self.lex.is_alias(tok.text, self.lang):
            canonical = self.lex.keyword(cid, self.lang)
            self.warn(tok, f"non-canonical spelling {tok.text!r}; canonical keyword is {canonical!r}")
        self.next()
        return cid, tok

    def expect_keyword(self, want: CsmId) -> Token:
        cid, tok = self.take_keyword(want)
        if cid is None:
            self.fail(tok, f"expected {self.spell(want)}, found {tok.describe()}", [self.spell(want)])
        return tok

    def spell(self, cid: CsmId) -> str:
        if self.syntax is SyntaxKind.SHORTHAND:
            return repr(L.SHORTHAND_KEYWORDS.get(cid, str(cid)))
        return repr(self.lex.keyword(cid, self.lang))

    def variable(self) -> str:
        tok = self.peek()
        if tok.kind is Tok.WORD and self.keyword(tok) is None and is_variable(tok.text):
            self.next()
            return tok.text
        if tok.kind is Tok.WORD and self.keyword(tok) is not None:
            self.fail(tok, f"reserved keyword {tok.text!r} cannot be used as a variable", ["variable"])
        self.fail(tok, f"expected a variable, found {tok.describe()}", ["variable"])

    def item(self, kind: ItemKind | None = None, what: str = "item") -> ItemId:
        tok = self.peek()
        if tok.kind is Tok.NUMBER and kind in (ItemKind.Q, None):
            self.fail(tok, f"bare number {tok.text} where a Q item is expected; did you mean Q{tok.text}?",
                      ["Q item"])
        if tok.kind is not Tok.ITEM:
            label = f"{kind.value} item" if kind else "item"
            self.fail(tok, f"expected {what}, found {tok.describe()}", [label])
        try:
            it = ItemId.parse(tok.text)
        except CosmoError as exc:
            self.fail(tok, str(exc))
        if kind is not None and it.kind is not kind:
            self.fail(tok, f"{what} must be a {kind.value} item, found {tok.text}", [f"{kind.value} item"])
        self.next()
        return it

    def constraint(self) -> ValueConstraint | None:
        if not self.peek().is_punct("{"):
            return None
        self.next()
        body = self.next()
        try:
            vc = parse_constraint(body.text)
        except (ConstraintSyntaxError, ValueError) as exc:
            self.fail(body, f"bad value constraint: {exc}")
        self.expect("}")
        return vc

    # grammar

    def model(self) -> Model:
        decls = []
        names: dict[str, Token] = {}
        while self.peek().kind is not Tok.EOF:
            start = self.pos
            try:
                decl, tok = self.declaration()
                if isinstance(decl, Constructor):
                    if decl.name in names:
                        self.fail(tok, f"constructor name {decl.name!r} is already declared", violation=True)
                    names[decl.name] = tok
                decls.append(decl)
            except _Fail as f:
                self.diagnostics.append(f.diag)
                self.failed_violation_only &= f.violation
                self.resync(start)
        return Model(tuple(decls))

    def resync(self, start: int):
        self.pos = max(self.pos, start + 1)
        while self.peek().kind is not Tok.EOF:
            try:
                cid = self.keyword(self.peek())
            except _Fail:
                cid = None
            if cid in _DECLARATION_IDS:
                return
            self.pos += 1

    def declaration(self):
        cid, tok = self.take_keyword()
        if cid in _CONSTRUCTOR_KINDS:
            return self.constructor(_CONSTRUCTOR_KINDS[cid], tok), tok
        if cid in _LINK_KINDS:
            return self.link(_LINK_KINDS[cid], tok), tok
        expected = [self.spell(c) for c in (L.TYPE_CONSTRUCTOR, L.INSTANCE_CONSTRUCTOR,
                                            L.SUB_CONSTRUCTOR_OF, L.INSTANCE_OF, L.PART_OF)]
        self.fail(tok, f"expected a declaration, found {tok.describe()}", expected)

    def link(self, kind: LinkKind, kw: Token) -> Link:
        self.expect("(")
        source = self.variable()
        self.expect(",")
        target = self.variable()
        self.expect(")")
        if source == target and kind is not LinkKind.PART_OF:
            self.fail(kw, f"{kind.value} cannot link {source!r} to itself", violation=True)
        return Link(kind, source, target)

    def constructor(self, kind: ConstructorKind, kw: Token) -> Constructor:
        self.expect(":")
        name = self.variable()
        self.expect("(")
        drafts: list[_BlockDraft] = []
        while True:
            self.definition(drafts)
            tok = self.peek()
            if tok.is_punct(","):
                self.next()
                if self.peek().is_punct(")"):
                    self.warn(tok, "trailing comma before ')'")
                    self.next()
                    break
                continue
            if tok.is_punct(")"):
                self.next()
                break
            self.fail(tok, f"expected ',' or ')', found {tok.describe()}", ["','", "')'"])
        blocks = [self.finish_block(d) for d in drafts]
        if kind is ConstructorKind.INSTANCE and not any(b.instantiations for b in blocks):
            self.fail(kw, f"instance constructor {name!r} needs at least one instantiation", violation=True)
        return Constructor(kind, name, tuple(blocks))

    def finish_block(self, d: _BlockDraft) -> Block:
        if len(d.roles) < 2:
            self.fail(d.start, f"predicate {d.predicate.pitem} needs two role declarations",
                      ["role declaration"])
        p = d.predicate
        if p.var1 == p.var2:
            self.fail(d.start, f"predicate {p.pitem} relates {p.var1!r} to itself", violation=True)
        role_vars = {r.var for r in d.roles}
        if role_vars != {p.var1, p.var2}:
            self.fail(d.start, f"roles {sorted(role_vars)} do not match the variables of "
                               f"{p.pitem}({p.var1},{p.var2})", violation=True)
        for j, tok in d.joins:
            if not j.homogeneous:
                self.fail(tok, f"join mixes item kinds: {j.left}, {j.right}", violation=True)
        for var, tok in d.mandatories:
            if var not in role_vars:
                self.fail(tok, f"mandatory {var!r} is not a role of {p.pitem}", violation=True)
        return Block(p, d.roles[0], d.roles[1], tuple(d.functions), tuple(j for j, _ in d.joins),
                     tuple(v for v, _ in d.mandatories), tuple(d.instantiations))

    def definition(self, drafts: list[_BlockDraft]):
        tok = self.peek()
        if self.syntax is SyntaxKind.LONGFORM:
            self.long_definition(drafts, tok)
        else:
            self.short_definition(drafts, tok)

    def current(self, drafts: list[_BlockDraft], tok: Token, what: str) -> _BlockDraft:
        if not drafts:
            self.fail(tok, f"a definition must start with a predicate, found {what}", ["predicate"])
        d = drafts[-1]
        if what != "role" and len(d.roles) < 2:
            self.fail(tok, f"expected a role declaration for {d.predicate.pitem}, found {what}",
                      ["role declaration"])
        if what == "role" and len(d.roles) >= 2:
            self.fail(tok, f"predicate {d.predicate.pitem} already has two roles", ["','", "')'"])
        if what == "role" and (d.functions or d.joins or d.mandatories or d.instantiations):
            self.fail(tok, "role declarations must directly follow their predicate")
        return d

    def add_instantiation(self, drafts: list[_BlockDraft], tok: Token, type_item: ItemId, rhs: list[ItemId]):
        d = self.current(drafts, tok, "instantiation")
        target = d
        if type_item not in d.fillers():
            # a trailing instance selector applies to the block whose role it types
            for earlier in reversed(drafts[:-1]):
                if type_item in earlier.fillers():
                    target = earlier
                    break
        for inst in rhs:
            target.instantiations.append(Instantiation(type_item, inst))

    def instance_rhs(self) -> list[ItemId]:
        self.expect("=")
        tok = self.peek()
        if tok.kind is Tok.ITEM:
            return [self.item(ItemKind.Q, "instance")]
        if not tok.is_punct("{"):
            self.fail(tok, f"expected '{{' or a Q item after '=', found {tok.describe()}", ["'{'", "Q item"])
        self.next()
        body = self.next()
        out = []
        for part in split_items(body.text):
            text = part.strip()
            try:
                it = ItemId.parse(text)
            except CosmoError:
                it = None
            if it is None or not it.is_q:
                self.fail(body, f"instantiation expects Q items, found {text!r}", ["Q item"])
            out.append(it)
        self.expect("}")
        return out

    def role_head(self, drafts: list[_BlockDraft]) -> tuple[_BlockDraft, str, ItemId | None]:
        tok = self.peek()
        d = self.current(drafts, tok, "role")
        var = self.variable()
        name = None
        if self.peek().is_punct("["):
            self.next()
            name = self.item(ItemKind.Q, "role name")
            self.expect("]")
        self.expect(":")
        return d, var, name

    def long_definition(self, drafts: list[_BlockDraft], tok: Token):
        cid, kw = self.take_keyword()
        if cid == L.PROPERTY:
            self.expect("(")
            p = self.item(ItemKind.P, "predicate")
            self.expect("(")
            v1 = self.variable()
            self.expect(",")
            v2 = self.variable()
            self.expect(")")
            self.expect(")")
            drafts.append(_BlockDraft(PredicateDecl(p, v1, v2), kw))
        elif cid == L.FUNCTION:
            d = self.current(drafts, kw, "function")
            self.expect("(")
            z = self.item(ItemKind.Z, "function")
            self.expect("(")
            args = [self.item(ItemKind.Q, "function argument")]
            while self.peek().is_punct(","):
                self.next()
                args.append(self.item(ItemKind.Q, "function argument"))
            self.expect(")")
            self.expect(")")
            d.functions.append(FunctionDecl(z, tuple(args), self.constraint()))
        elif cid == L.JOIN:
            self.join(drafts, kw)
        elif cid == L.IS_MANDATORY:
            self.mandatory(drafts, kw)
        elif cid in (L.OBJECT_TYPE, L.OBJECT):
            if cid == L.OBJECT:
                self.fail(kw, "instantiations are written with the object-type keyword",
                          [self.spell(L.OBJECT_TYPE)])
            self.expect("(")
            t = self.item(ItemKind.Q, "instantiated type")
            self.expect(")")
            self.add_instantiation(drafts, kw, t, self.instance_rhs())
        elif cid is None and tok.kind is Tok.WORD:
            d, var, name = self.role_head(drafts)
            kind_tok = self.peek()
            kcid, _ = self.take_keyword()
            if kcid in (L.OBJECT, L.OBJECT_TYPE):
                self.expect("(")
                filler = self.item(ItemKind.Q, "role filler")
                self.expect(")")
                kind = RoleKind.OBJECT if kcid == L.OBJECT else RoleKind.OBJECT_TYPE
            elif kcid is None and kind_tok.kind in (Tok.ITEM, Tok.NUMBER):
                filler = self.item(ItemKind.Q, "role filler")
                kind = RoleKind.OBJECT_TYPE
                self.warn(kind_tok, f"bare filler {filler} in longform; read as {self.spell(L.OBJECT_TYPE)}")
            else:
                self.fail(kind_tok, f"expected {self.spell(L.OBJECT_TYPE)} or {self.spell(L.OBJECT)}, "
                                    f"found {kind_tok.describe()}",
                          [self.spell(L.OBJECT_TYPE), self.spell(L.OBJECT)])
            d.roles.append(RoleDecl(var, filler, kind, name, self.constraint()))
        else:
            self.fail(tok, f"expected a definition, found {tok.describe()}",
                      [self.spell(L.PROPERTY), "role declaration", self.spell(L.FUNCTION),
                       self.spell(L.JOIN), self.spell(L.IS_MANDATORY), self.spell(L.OBJECT_TYPE)])

    def join(self, drafts: list[_BlockDraft], kw: Token):
        d = self.current(drafts, kw, "join")
        self.expect("(")
        a = self.item(None, "join member")
        self.expect(",")
        b = self.item(None, "join member")
        self.expect(")")
        if a.is_z or b.is_z:
            self.fail(kw, "joins relate two Q items or two P items", violation=True)
        d.joins.append((JoinDecl.of(a, b), kw))

    def mandatory(self, drafts: list[_BlockDraft], kw: Token):
        d = self.current(drafts, kw, "mandatory")
        self.expect("(")
        var_tok = self.peek()
        d.mandatories.append((self.variable(), var_tok))
        self.expect(")")

    def short_definition(self, drafts: list[_BlockDraft], tok: Token):
        nxt = self.peek(1)
        if tok.kind is Tok.ITEM:
            it = ItemId.parse(tok.text)
            if it.is_p and nxt.is_punct("("):
                self.next()
                self.next()
                v1 = self.variable()
                self.expect(",")
                v2 = self.variable()
                self.expect(")")
                drafts.append(_BlockDraft(PredicateDecl(it, v1, v2), tok))
                return
            if it.is_z and nxt.is_punct("("):
                d = self.current(drafts, tok, "function")
                self.next()
                self.next()
                args = [self.item(ItemKind.Q, "function argument")]
                while self.peek().is_punct(","):
                    self.next()
                    args.append(self.item(ItemKind.Q, "function argument"))
                self.expect(")")
                d.functions.append(FunctionDecl(it, tuple(args), self.constraint()))
                return
            if it.is_q and nxt.is_punct("."):
                d = self.current(drafts, tok, "function")
                self.next()
                self.next()
                z = self.item(ItemKind.Z, "function")
                d.functions.append(FunctionDecl(z, (it,), self.constraint()))
                return
            if it.is_q and nxt.is_punct("="):
                self.next()
                self.add_instantiation(drafts, tok, it, self.instance_rhs())
                return
            self.fail(tok, f"unexpected {tok.text} in a definition",
                      ["P(var,var)", "Z(Q,...)", "Q.Z", "Q={Q}"])
        if tok.kind is Tok.WORD:
            cid = self.keyword(tok)
            if cid == L.JOIN:
                self.next()
                self.join(drafts, tok)
                return
            if cid == L.IS_MANDATORY:
                self.next()
                self.mandatory(drafts, tok)
                return
            if cid is None:
                d, var, name = self.role_head(drafts)
                if self.peek().is_punct("("):
                    self.next()
                    filler = self.item(ItemKind.Q, "role filler")
                    self.expect(")")
                else:
                    filler = self.item(ItemKind.Q, "role filler")
                d.roles.append(RoleDecl(var, filler, RoleKind.OBJECT_TYPE, name, self.constraint()))
                return
        self.fail(tok, f"expected a definition, found {tok.describe()}",
                  ["P(var,var)", "role declaration", "Z(Q,...)", "Join", "IsMand", "Q={Q}"])


# detection


def _first_keyword_token(tokens: list[Token]) -> Token | None:
    for tok in tokens:
        if tok.kind in (Tok.WORD, Tok.CSM):
            return tok
    return None


def _candidates(tokens: list[Token], lex: Lexicon) -> tuple[SyntaxKind, list[str]]:
    tok = _first_keyword_token(tokens)
    if tok is None:
        raise Undetectable("no keyword found; cannot tell the notation", [])
    if tok.kind is Tok.CSM:
        return SyntaxKind.LONGFORM, [L.PIVOT] if L.PIVOT in lex.languages else []
    langs = [lang for lang in lex.languages_with(tok.text) if lang != L.PIVOT]
    if langs:
        words = [t.text for t in tokens if t.kind is Tok.WORD]
        score = {lang: sum(1 for w in words if lex.find(w, lang) is not None) for lang in langs}
        langs.sort(key=lambda lang: -score[lang])
        return SyntaxKind.LONGFORM, langs
    if tok.text in L.SHORTHAND_LOOKUP:
        return SyntaxKind.SHORTHAND, []
    diag = ParseDiagnostic(Severity.ERROR, tok.span, f"{tok.text!r} is not a keyword in any known notation")
    raise Undetectable(f"{tok.text!r} is not a keyword in any known notation", [diag])


def detect_syntax(text: str, lex: Lexicon | None = None) -> tuple[SyntaxKind, str | None]:
    """Guess notation and language from the first keyword.

    Shorthand keywords are language-independent, so the language is ``None``
    for shorthand input.
    """
    lex = lex or default_lexicon()
    kind, langs = _candidates(tokenize(text), lex)
    return kind, (langs[0] if langs else None)


def _run(tokens, syntax, lang, lex) -> ParseResult:
    p = _Parser(tokens, syntax, lang, lex)
    model = p.model()
    errors = [d for d in p.diagnostics if d.severity is Severity.ERROR]
    if errors:
        exc = GrammarViolation if p.failed_violation_only else ParseError
        raise exc("; ".join(str(d) for d in errors), p.diagnostics)
    return ParseResult(model, p.diagnostics, syntax, lang)


def parse(text: str, syntax: SyntaxKind | str = AUTO, lang: str = AUTO,
          lex: Lexicon | None = None) -> ParseResult:
    lex = lex or default_lexicon()
    tokens = tokenize(text)
    if isinstance(syntax, str) and syntax != AUTO:
        syntax = SyntaxKind(syntax)
    if len(tokens) == 1:
        return ParseResult(Model(), [], None if syntax == AUTO else syntax, None if lang == AUTO else lang)
    if syntax == AUTO:
        syntax, langs = _candidates(tokens, lex)
    else:
        langs = []
    if syntax is SyntaxKind.SHORTHAND:
        return _run(tokens, syntax, None if lang == AUTO else lang, lex)
    if lang != AUTO:
        lex._require_lang(lang)
        return _run(tokens, syntax, lang, lex)
    if not langs:
        langs = _candidates(tokens, lex)[1] or list(lex.languages)
    results, first_error = [], None
    for candidate in langs:
        try:
            results.append(_run(tokens, syntax, candidate, lex))
        except ParseError as exc:
            first_error = first_error or exc
    if not results:
        raise first_error
    distinct = {r.model for r in results}
    if len(distinct) > 1:
        tags = ", ".join(r.lang for r in results)
        raise AmbiguousLanguage(f"text parses differently as {tags}; pass an explicit language", [])
    return results[0]
