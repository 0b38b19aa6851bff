"""Parsing and serialization of the longform and shorthand notations."""

from __future__ import annotations

from ..lexicon import Lexicon
from .diagnostics import ParseDiagnostic, Severity
from .parser import AUTO, ParseResult, SyntaxKind, detect_syntax, parse
from .serializer import serialize


def convert(text: str, to_syntax: SyntaxKind | str = SyntaxKind.LONGFORM, to_lang: str = "en",
            from_syntax: SyntaxKind | str = AUTO, from_lang: str = AUTO,
            lex: Lexicon | None = None) -> str:
    """Parse ``text`` and re-serialize it in another notation or language."""
    result = parse(text, from_syntax, from_lang, lex)
    return serialize(result.model, to_syntax, to_lang, lex)


__all__ = [
    "AUTO",
    "ParseDiagnostic",
    "ParseResult",
    "Severity",
    "SyntaxKind",
    "convert",
    "detect_syntax",
    "parse",
    "serialize",
]
