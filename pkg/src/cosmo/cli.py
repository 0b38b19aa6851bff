"""``cosmo`` command line.

Exit codes: 0 success, 1 parse or validation errors, 2 usage, 3 I/O or
network failure. Payload goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import re
import sys
from dataclasses import dataclass
from typing import TextIO

from . import algebra
from .dot import export_dot
from .errors import CosmoError, EndpointError, FormatError, ParseError
from .evaluate import eval_constructor
from .fol import render_theory, translate
from .functions import default_registry, load_manifest
from .graph import load_graph
from .lexicon import default_lexicon, load_lexicon
from .model import Constructor, ItemId, Model, to_data
from .sparql import CompileOptions, EndpointConfig, compile_constructor, endpoint_item_lookup, execute
from .syntax import ParseResult, SyntaxKind, parse, serialize
from .validate import ItemCatalog, validate

ENDPOINT_ENV = "COSMO_SPARQL_ENDPOINT"

OK, FINDINGS, USAGE, IO_FAILURE = 0, 1, 2, 3


@dataclass
class CommandOutcome:
    exit_code: int
    stdout: str
    stderr: str


class _Usage(Exception):
    pass


class _IOFailure(Exception):
    pass


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(f"{self.prog}: error: {message}")


def _syntax(text: str | None) -> SyntaxKind | str:
    return {"long": SyntaxKind.LONGFORM, "short": SyntaxKind.SHORTHAND, None: "auto", "auto": "auto"}[text]


class _Ctx:
    def __init__(self, args, stdin: TextIO, out: TextIO, err: TextIO):
        self.args = args
        self.stdin = stdin
        self.out = out
        self.err = err
        self.lex = default_lexicon()
        if getattr(args, "lexicon", None):
            try:
                self.lex = load_lexicon(args.lexicon)
            except OSError as exc:
                raise _IOFailure(f"cannot read {args.lexicon}: {exc.strerror}") from None

    def read(self, path: str | None) -> str:
        if path in (None, "-"):
            return self.stdin.read()
        try:
            with open(path, encoding="utf-8") as fh:
                return fh.read()
        except OSError as exc:
            raise _IOFailure(f"cannot read {path}: {exc.strerror}") from None

    def load(self) -> ParseResult:
        text = self.read(self.args.file)
        result = parse(text, _syntax(self.args.syntax), self.args.lang or "auto", self.lex)
        for d in result.diagnostics:
            self.err.write(f"{self.args.file or '<stdin>'}:{d}\n")
        return result

    def emit(self, model: Model, syntax: SyntaxKind | None, lang: str | None):
        self.out.write(serialize(model, syntax or SyntaxKind.LONGFORM, lang or "en", self.lex))

    def pick(self, model: Model, name: str | None, want=None) -> list[Constructor]:
        if name:
            try:
                return [model.constructor(name)]
            except KeyError:
                raise _Usage(f"no constructor named {name!r}") from None
        found = [c for c in model.constructors if want is None or want(c)]
        if not found:
            raise _Usage("no suitable constructor in the input")
        return found


def _cmd_parse(ctx: _Ctx) -> int:
    result = ctx.load()
    ctx.out.write(json.dumps(to_data(result.model), indent=2, ensure_ascii=False) + "\n")
    return OK


def _cmd_check(ctx: _Ctx) -> int:
    a = ctx.args
    result = ctx.load()
    if a.catalog:
        try:
            catalog = ItemCatalog.from_file(a.catalog)
        except OSError as exc:
            raise _IOFailure(f"cannot read {a.catalog}: {exc.strerror}") from None
    elif a.catalog_endpoint:
        catalog = ItemCatalog.from_endpoint(endpoint_item_lookup(EndpointConfig(a.catalog_endpoint)))
    else:
        catalog = ItemCatalog.open_world()
    report = validate(result.model, catalog)
    for f in report.findings:
        ctx.out.write(str(f) + "\n")
    n_err = len(report.errors)
    ctx.err.write(f"{len(report.findings)} finding(s), {n_err} error(s)\n")
    return FINDINGS if n_err else OK


def _cmd_fmt(ctx: _Ctx) -> int:
    a = ctx.args
    result = ctx.load()
    syntax = _syntax(a.to) if a.to else result.syntax
    if syntax == "auto":
        syntax = result.syntax
    ctx.emit(result.model, syntax, a.out_lang or result.lang or "en")
    return OK


def _cmd_translate(ctx: _Ctx) -> int:
    a = ctx.args
    result = ctx.load()
    text = serialize(result.model, result.syntax or SyntaxKind.LONGFORM, a.to_lang, ctx.lex)
    if a.resolve_labels:
        if not a.graph:
            raise _Usage("--resolve-labels needs --graph FILE")
        g = _load_graph(a.graph)
        label_lang = a.label_lang or a.to_lang
        text = _annotate(text, g, label_lang)
    ctx.out.write(text)
    return OK


def _annotate(text: str, g, lang: str) -> str:
    lines = []
    for line in text.splitlines():
        labels = []
        for tok in re.findall(r"\b[QPZ][1-9][0-9]*\b", line):
            lab = g.label(ItemId.parse(tok), lang)
            entry = f"{tok}={lab}"
            if lab and entry not in labels:
                labels.append(entry)
        lines.append(line + ("  // " + ", ".join(labels) if labels else ""))
    return "\n".join(lines) + "\n"


def _cmd_fol(ctx: _Ctx) -> int:
    result = ctx.load()
    ctx.out.write(render_theory(translate(result.model), "unicode" if ctx.args.unicode else "ascii"))
    return OK


def _load_graph(path: str):
    try:
        return load_graph(path)
    except OSError as exc:
        raise _IOFailure(f"cannot read {path}: {exc.strerror}") from None


def _cmd_eval(ctx: _Ctx) -> int:
    a = ctx.args
    result = ctx.load()
    g = _load_graph(a.graph)
    try:
        fr = load_manifest(a.functions) if a.functions else default_registry()
    except OSError as exc:
        raise _IOFailure(f"cannot read {a.functions}: {exc.strerror}") from None
    for c in ctx.pick(result.model, a.name):
        res = eval_constructor(c, g, fr, a.eval_lang)
        ctx.out.write(f"constructor {c.name}\n")
        for k, (b, br) in enumerate(zip(c.blocks, res.blocks), start=1):
            p = b.predicate
            ctx.out.write(f"block {k} {p.pitem}({p.var1},{p.var2}): {len(br.tuples)} tuple(s)\n")
            for s, o in sorted(br.tuples):
                ctx.out.write(f"  {s} {o}\n")
            for z, values in br.function_outputs.items():
                ctx.out.write(f"  {z} -> {', '.join(map(str, values)) or '(none)'}\n")
        ctx.out.write(f"realisable {'true' if res.realisable else 'false'}\n")
        for prob in res.problems:
            ctx.err.write(f"{c.name}: {type(prob).__name__}: {prob}\n")
    return OK


def _cmd_sparql(ctx: _Ctx) -> int:
    a = ctx.args
    result = ctx.load()
    opts = CompileOptions(lang=a.label_lang)
    endpoint = a.endpoint or os.environ.get(ENDPOINT_ENV)
    for c in ctx.pick(result.model, a.name):
        q = compile_constructor(c, opts)
        for note in q.notes:
            ctx.err.write(f"{c.name}: {note}\n")
        if not a.execute:
            ctx.out.write(q.text)
            continue
        if not endpoint:
            raise _Usage(f"--execute needs --endpoint URL or ${ENDPOINT_ENV}")
        try:
            ep = EndpointConfig(endpoint, a.timeout_ms, max_rows=a.max_rows)
        except ValueError as exc:
            raise _Usage(str(exc)) from None
        rows = execute(q, ep, opts.prefixes)
        cols = [v for v, _, _ in q.projection]
        ctx.out.write("\t".join(cols) + "\n")
        for row in rows:
            ctx.out.write("\t".join(str(row.get(v, "")) for v in cols) + "\n")
    return OK


def _cmd_generalize(ctx: _Ctx) -> int:
    result = ctx.load()
    derived = [algebra.generalize(c) for c in ctx.pick(result.model, ctx.args.name, lambda c: c.is_instance)]
    ctx.emit(Model(tuple(derived)), result.syntax, result.lang)
    return OK


def _parse_bindings(specs: list[str]) -> dict[ItemId, ItemId]:
    out: dict[ItemId, ItemId] = {}
    for spec in specs:
        t, sep, i = spec.partition("=")
        try:
            t_item, i_item = ItemId.parse(t.strip()), ItemId.parse(i.strip())
        except CosmoError:
            raise _Usage(f"--bind expects TYPE=INSTANCE with Q items, got {spec!r}") from None
        if not sep or not (t_item.is_q and i_item.is_q):
            raise _Usage(f"--bind expects TYPE=INSTANCE with Q items, got {spec!r}")
        if t_item in out:
            raise _Usage(f"type {t_item} is bound twice")
        out[t_item] = i_item
    return out


def _cmd_instantiate(ctx: _Ctx) -> int:
    result = ctx.load()
    bindings = _parse_bindings(ctx.args.bind)
    targets = ctx.pick(result.model, ctx.args.name, lambda c: not c.is_instance)
    derived = [algebra.instantiate(c, bindings) for c in targets]
    ctx.emit(Model(tuple(derived)), result.syntax, result.lang)
    return OK


def _cmd_merge(ctx: _Ctx) -> int:
    a = ctx.args
    result = ctx.load()
    c1, c2 = ctx.pick(result.model, a.first)[0], ctx.pick(result.model, a.second)[0]
    merged = algebra.merge(c1, c2, a.new_name)
    ctx.emit(Model((merged,)), result.syntax, result.lang)
    return OK


def _cmd_dot(ctx: _Ctx) -> int:
    ctx.out.write(export_dot(ctx.load().model))
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = _ArgParser(prog="cosmo", description="Parse, check, translate and run content-selection constructors.")
    p.add_argument("--lexicon", help="keyword table CSV (default: the bundled one)")
    sub = p.add_subparsers(dest="command", parser_class=_ArgParser)
    sub.required = True

    def cmd(name, fn, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("file", nargs="?", help="constructor file (default: standard input)")
        sp.add_argument("--syntax", choices=["auto", "long", "short"], default="auto", help="input notation")
        sp.add_argument("--from-lang", dest="lang", help="input keyword language (default: detect)")
        sp.set_defaults(fn=fn)
        return sp

    cmd("parse", _cmd_parse, "print the model as JSON")
    sp = cmd("check", _cmd_check, "run the validation rules")
    grp = sp.add_mutually_exclusive_group()
    grp.add_argument("--catalog", help="item catalog file, one item per line")
    grp.add_argument("--catalog-endpoint", help="SPARQL endpoint used as item catalog")
    grp.add_argument("--open-world", action="store_true", help="treat every item as known (default)")
    sp = cmd("fmt", _cmd_fmt, "reformat canonically")
    sp.add_argument("--to", choices=["long", "short"], help="output notation (default: same as input)")
    sp.add_argument("--lang", dest="out_lang", help="output keyword language (default: same as input)")
    sp = cmd("translate", _cmd_translate, "change keyword language, keeping the notation")
    sp.add_argument("--lang", dest="to_lang", required=True, help="target keyword language")
    sp.add_argument("--resolve-labels", action="store_true", help="append item labels as comments")
    sp.add_argument("--graph", help="graph file providing labels")
    sp.add_argument("--label-lang", help="label language (default: the target language)")
    sp = cmd("fol", _cmd_fol, "first-order translation")
    sp.add_argument("--unicode", action="store_true", help="use logical symbols instead of ascii words")
    sp = cmd("eval", _cmd_eval, "evaluate over a local graph")
    sp.add_argument("--graph", required=True, help="graph file")
    sp.add_argument("--functions", help="function manifest (zitem arity builtin)")
    sp.add_argument("--lang", dest="eval_lang", default="en", help="label language for text constraints")
    sp.add_argument("--name", help="only this constructor")
    sp = cmd("sparql", _cmd_sparql, "compile to SPARQL and optionally run it")
    sp.add_argument("--endpoint", help=f"endpoint URL (default: ${ENDPOINT_ENV})")
    sp.add_argument("--execute", action="store_true", help="send the query and print result rows")
    sp.add_argument("--timeout-ms", type=int, default=30_000)
    sp.add_argument("--max-rows", type=int, default=10_000)
    sp.add_argument("--label-lang", default="en", help="language tag for label filters")
    sp.add_argument("--name", help="only this constructor")
    sp = cmd("generalize", _cmd_generalize, "drop instance selectors")
    sp.add_argument("--name", help="only this constructor")
    sp = cmd("instantiate", _cmd_instantiate, "pin role types to instances")
    sp.add_argument("--bind", action="append", required=True, metavar="T=I", help="type=instance, repeatable")
    sp.add_argument("--name", help="only this constructor")
    sp = sub.add_parser("merge", help="combine two constructors")
    sp.add_argument("first")
    sp.add_argument("second")
    sp.add_argument("file", nargs="?")
    sp.add_argument("--name", dest="new_name", required=True)
    sp.add_argument("--syntax", choices=["auto", "long", "short"], default="auto")
    sp.add_argument("--from-lang", dest="lang")
    sp.set_defaults(fn=_cmd_merge)
    cmd("dot", _cmd_dot, "Graphviz diagram")
    return p


def run(argv: list[str], stdin: TextIO | None = None) -> CommandOutcome:
    out, err = io.StringIO(), io.StringIO()
    code = _dispatch(argv, stdin if stdin is not None else sys.stdin, out, err)
    return CommandOutcome(code, out.getvalue(), err.getvalue())


def _dispatch(argv: list[str], stdin: TextIO, out: TextIO, err: TextIO) -> int:
    parser = build_parser()
    try:
        args, extras = parser.parse_known_args(argv)
        # "merge A B --name N FILE": the file can trail the options
        if extras and args.command == "merge" and args.file is None and len(extras) == 1 \
                and not extras[0].startswith("-"):
            args.file = extras[0]
        elif extras:
            parser.error(f"unrecognized arguments: {' '.join(extras)}")
    except _Usage as exc:
        err.write(parser.format_usage())
        err.write(f"{exc}\n")
        return USAGE
    except SystemExit as exc:  # --help
        return OK if not exc.code else USAGE
    try:
        ctx = _Ctx(args, stdin, out, err)
        return args.fn(ctx)
    except _Usage as exc:
        err.write(f"cosmo: {exc}\n")
        return USAGE
    except (_IOFailure, EndpointError) as exc:
        err.write(f"cosmo: {exc}\n")
        return IO_FAILURE
    except ParseError as exc:
        for d in exc.diagnostics:
            err.write(f"{args.file or '<stdin>'}:{d}\n")
        if not exc.diagnostics:
            err.write(f"cosmo: {exc}\n")
        return FINDINGS
    except FormatError as exc:
        err.write(f"cosmo: {exc}\n")
        return FINDINGS
    except CosmoError as exc:
        err.write(f"cosmo: {type(exc).__name__}: {exc}\n")
        return FINDINGS


def main(argv: list[str] | None = None) -> int:
    return _dispatch(sys.argv[1:] if argv is None else argv, sys.stdin, sys.stdout, sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
