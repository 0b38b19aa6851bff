"""Value-constraint bodies: the text between ``{`` and ``}``.

Items are comma separated; each is a quoted string, a Q item, a number, a
range ``lo..hi``, a comparison ``op number`` or, failing all of those, a bare
label (``{has scholarship}``).
"""

from __future__ import annotations

import re
from decimal import Decimal

from ..model import (
    CompareOp,
    Comparison,
    ItemId,
    Literal,
    Range,
    ValueConstraint,
    ValueItem,
)

_NUM = r"-?[0-9]+(?:\.[0-9]+)?"
_NUM_RE = re.compile(_NUM + r"\Z")
_RANGE_RE = re.compile(rf"({_NUM})\s*\.\.\s*({_NUM})\Z")
_CMP_RE = re.compile(rf"(<=|>=|≤|≥|<|>)\s*({_NUM})\Z")
_Q_RE = re.compile(r"Q[1-9][0-9]*\Z")
_OPS = {"<": CompareOp.LT, "<=": CompareOp.LE, "≤": CompareOp.LE,
        ">": CompareOp.GT, ">=": CompareOp.GE, "≥": CompareOp.GE}
_BARE_FORBIDDEN = set('",{}\\')


class ConstraintSyntaxError(ValueError):
    pass


def number(text: str) -> int | float:
    return float(text) if "." in text else int(text)


def split_items(body: str) -> list[str]:
    parts, buf, quoted, i = [], [], False, 0
    while i < len(body):
        ch = body[i]
        if quoted and ch == "\\" and i + 1 < len(body):
            buf.append(body[i:i + 2])
            i += 2
            continue
        if ch == '"':
            quoted = not quoted
        if ch == "," and not quoted:
            parts.append("".join(buf))
            buf = []
        else:
            buf.append(ch)
        i += 1
    if quoted:
        raise ConstraintSyntaxError("unterminated string in value constraint")
    parts.append("".join(buf))
    return parts


def parse_item(raw: str) -> ValueItem:
    text = raw.strip()
    if not text:
        raise ConstraintSyntaxError("empty value-constraint item")
    if text.startswith('"'):
        if len(text) < 2 or not text.endswith('"'):
            raise ConstraintSyntaxError(f"malformed string {text!r}")
        return Literal(_unescape(text[1:-1]))
    if _Q_RE.match(text):
        return Literal(ItemId.parse(text))
    if _NUM_RE.match(text):
        return Literal(number(text))
    m = _RANGE_RE.match(text)
    if m:
        lo, hi = number(m.group(1)), number(m.group(2))
        if lo > hi:
            raise ConstraintSyntaxError(f"empty range {text!r}")
        return Range(lo, hi)
    m = _CMP_RE.match(text)
    if m:
        return Comparison(_OPS[m.group(1)], number(m.group(2)))
    if text[0] in "<>≤≥":
        raise ConstraintSyntaxError(f"comparison needs a number: {text!r}")
    if _BARE_FORBIDDEN & set(text):
        raise ConstraintSyntaxError(f"unquoted label contains reserved characters: {text!r}")
    return Literal(" ".join(text.split()))


def parse_constraint(body: str) -> ValueConstraint:
    return ValueConstraint(tuple(parse_item(p) for p in split_items(body)))


def _unescape(s: str) -> str:
    return re.sub(r"\\(.)", r"\1", s)


def format_number(v: int | float) -> str:
    text = repr(v)
    if "e" in text or "E" in text:
        text = format(Decimal(text), "f")
        if "." not in text:
            text += ".0"
    return text


def format_item(it: ValueItem) -> str:
    if isinstance(it, Range):
        return f"{format_number(it.lo)}..{format_number(it.hi)}"
    if isinstance(it, Comparison):
        return f"{it.op.value}{format_number(it.bound)}"
    v = it.value
    if isinstance(v, ItemId):
        return str(v)
    if isinstance(v, (int, float)):
        return format_number(v)
    if _bare_safe(v):
        return v
    return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _bare_safe(text: str) -> bool:
    if not text or text != " ".join(text.split()):
        return False
    if _BARE_FORBIDDEN & set(text) or text[0] in "<>≤≥":
        return False
    try:
        return parse_item(text) == Literal(text)
    except ConstraintSyntaxError:
        return False


def format_constraint(vc: ValueConstraint) -> str:
    return "{" + ", ".join(format_item(it) for it in vc.items) + "}"
