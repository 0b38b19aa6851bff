"""Tokenizer shared by both notations.

The lexer is language-independent: words come out as ``WORD`` tokens and the
parser decides, against the lexicon language in use, whether a word is a
reserved keyword or a variable. The body of a ``{...}`` group is captured raw
as a single ``TEXT`` token because value constraints have their own small
grammar (see ``constraints``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from ..errors import ParseError
from ..model import _CSM_RE, _ITEM_RE
from .diagnostics import ParseDiagnostic, Severity


class Tok(Enum):
    ITEM = "item"
    CSM = "csm"
    WORD = "word"
    NUMBER = "number"
    PUNCT = "punct"
    TEXT = "text"
    EOF = "end of input"


@dataclass(frozen=True)
class Token:
    kind: Tok
    text: str
    line: int
    col: int

    @property
    def span(self) -> tuple[int, int]:
        return (self.line, self.col)

    def is_punct(self, ch: str) -> bool:
        return self.kind is Tok.PUNCT and self.text == ch

    def describe(self) -> str:
        if self.kind is Tok.EOF:
            return "end of input"
        return repr(self.text)


PUNCT = set(":,()[]=.")
_WORD_RE = re.compile(r"[^\W_](?:[^\W_]|_(?=[^\W_]))*")
_NUMBER_RE = re.compile(r"[0-9]+(?:\.[0-9]+)?")


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(text)

    def advance(k: int):
        nonlocal i, line, col
        for ch in text[i:i + k]:
            if ch == "\n":
                line += 1
                col = 1
            else:
                col += 1
        i += k

    while i < n:
        ch = text[i]
        if ch.isspace() or ch == "﻿":
            advance(1)
            continue
        if text.startswith("//", i):
            end = text.find("\n", i)
            advance((n if end < 0 else end) - i)
            continue
        start = (line, col)
        if ch == "{":
            close = _find_close(text, i + 1)
            if close < 0:
                raise _error("unterminated '{' group", start, ["'}'"])
            tokens.append(Token(Tok.PUNCT, "{", *start))
            advance(1)
            body = text[i:close]
            tokens.append(Token(Tok.TEXT, body, line, col))
            advance(len(body))
            tokens.append(Token(Tok.PUNCT, "}", line, col))
            advance(1)
            continue
        if ch in PUNCT:
            tokens.append(Token(Tok.PUNCT, ch, *start))
            advance(1)
            continue
        if ch.isdigit():
            m = _NUMBER_RE.match(text, i)
            word = _WORD_RE.match(text, i)
            if word and word.end() > m.end():
                raise _error(f"identifier may not start with a digit: {word.group()!r}", start, None)
            tokens.append(Token(Tok.NUMBER, m.group(), *start))
            advance(m.end() - i)
            continue
        m = _WORD_RE.match(text, i)
        if m:
            word = m.group()
            if _ITEM_RE.match(word):
                kind = Tok.ITEM
            elif _CSM_RE.match(word):
                kind = Tok.CSM
            else:
                kind = Tok.WORD
            tokens.append(Token(kind, word, *start))
            advance(len(word))
            continue
        if ch == "}":
            raise _error("'}' without matching '{'", start, None)
        raise _error(f"unexpected character {ch!r}", start, None)
    tokens.append(Token(Tok.EOF, "", line, col))
    return tokens


def _find_close(text: str, i: int) -> int:
    quoted = False
    while i < len(text):
        ch = text[i]
        if quoted:
            if ch == "\\":
                i += 2
                continue
            if ch == '"':
                quoted = False
        elif ch == '"':
            quoted = True
        elif ch == "}":
            return i
        elif ch == "{":
            return -1
        i += 1
    return -1


def _error(message: str, span: tuple[int, int], expected) -> ParseError:
    diag = ParseDiagnostic(Severity.ERROR, span, message, tuple(expected) if expected else None)
    return ParseError(f"{span[0]}:{span[1]}: {message}", [diag])
