"""Multilingual keyword table keyed by CSM identifiers.

Reserved words of the language are never hard-coded in a natural language:
every feature has a CSM identifier, and each lexicon language maps that
identifier to one surface keyword (plus optional accepted spellings). The
pivot language ``csm`` renders the identifiers themselves.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .errors import LexiconError, MissingEntry, NotAKeyword, UnknownLanguage
from .model import CSM_MAX, CsmId, ItemId

PIVOT = "csm"

OBJECT = CsmId(1)
OBJECT_TYPE = CsmId(2)
PROPERTY = CsmId(3)
ROLE = CsmId(4)
FUNCTION = CsmId(5)
INSTANCE_CONSTRUCTOR = CsmId(6)
TYPE_CONSTRUCTOR = CsmId(7)
SUB_CONSTRUCTOR_OF = CsmId(8)
INSTANCE_OF = CsmId(9)
PART_OF = CsmId(10)
JOIN = CsmId(11)
IS_MANDATORY = CsmId(12)
NAME = CsmId(13)
VALUE_CONSTRAINT = CsmId(14)

# Shorthand keywords do not vary with the language.
SHORTHAND_KEYWORDS: dict[CsmId, str] = {
    TYPE_CONSTRUCTOR: "TC",
    INSTANCE_CONSTRUCTOR: "IC",
    SUB_CONSTRUCTOR_OF: "SubTC",
    INSTANCE_OF: "InstOf",
    PART_OF: "Po",
    JOIN: "Join",
    IS_MANDATORY: "IsMand",
}
SHORTHAND_LOOKUP: dict[str, CsmId] = {v: k for k, v in SHORTHAND_KEYWORDS.items()}

ALL_IDS = tuple(CsmId(n) for n in range(1, CSM_MAX + 1))


@dataclass(frozen=True)
class LexiconEntry:
    wikidata_item: ItemId | None = None
    keywords: dict[str, str] = field(default_factory=dict)
    labels: dict[str, str] = field(default_factory=dict)
    aliases: dict[str, tuple[str, ...]] = field(default_factory=dict)


class Lexicon:
    """Read-only keyword table; build it with :func:`load_lexicon`."""

    def __init__(self, entries: dict[CsmId, LexiconEntry], languages: list[str]):
        self.entries = entries
        self.languages = tuple(languages)
        self._lookup: dict[str, dict[str, CsmId]] = {lang: {} for lang in languages}
        self._canonical: dict[str, set[str]] = {lang: set() for lang in languages}
        for cid, entry in entries.items():
            for lang, kw in entry.keywords.items():
                self._add(lang, kw, cid)
                self._canonical[lang].add(kw)
            for lang, extra in entry.aliases.items():
                for kw in extra:
                    self._add(lang, kw, cid)
        self._check_complete()

    def _add(self, lang: str, kw: str, cid: CsmId):
        table = self._lookup[lang]
        if kw in table and table[kw] != cid:
            raise LexiconError(f"keyword {kw!r} is used twice in language {lang!r}")
        table[kw] = cid

    def _check_complete(self):
        for cid in ALL_IDS:
            if cid not in self.entries:
                raise MissingEntry(f"lexicon has no row for {cid}")
            for lang in self.languages:
                if lang not in self.entries[cid].keywords:
                    raise MissingEntry(f"lexicon has no {lang!r} keyword for {cid}")

    def _require_lang(self, lang: str):
        if lang not in self._lookup:
            raise UnknownLanguage(f"language {lang!r} is not in the lexicon (have: {', '.join(self.languages)})")

    def keyword(self, cid: CsmId, lang: str) -> str:
        self._require_lang(lang)
        entry = self.entries.get(cid)
        if entry is None or lang not in entry.keywords:
            raise MissingEntry(f"no {lang!r} keyword for {cid}")
        return entry.keywords[lang]

    def lookup(self, keyword: str, lang: str) -> CsmId:
        found = self.find(keyword, lang)
        if found is None:
            raise NotAKeyword(f"{keyword!r} is not a {lang!r} keyword")
        return found

    def find(self, keyword: str, lang: str) -> CsmId | None:
        self._require_lang(lang)
        return self._lookup[lang].get(keyword)

    def is_alias(self, keyword: str, lang: str) -> bool:
        """True for accepted but non-canonical spellings."""
        return keyword in self._lookup[lang] and keyword not in self._canonical[lang]

    def languages_with(self, keyword: str) -> list[str]:
        return [lang for lang in self.languages if keyword in self._lookup[lang]]

    def reserved_words(self) -> set[str]:
        words = set(SHORTHAND_LOOKUP)
        for table in self._lookup.values():
            words.update(table)
        return words

    def label(self, cid: CsmId, lang: str) -> str:
        self._require_lang(lang)
        return self.entries[cid].labels.get(lang, self.keyword(cid, lang))


def lexicon_keyword(lex: Lexicon, cid: CsmId, lang: str) -> str:
    return lex.keyword(cid, lang)


def lexicon_lookup(lex: Lexicon, keyword: str, lang: str) -> CsmId:
    return lex.lookup(keyword, lang)


def parse_lexicon(text: str) -> Lexicon:
    """Build a lexicon from CSV text (header ``csm_id,wikidata_item,lang,keyword,label``).

    The keyword column may hold ``canonical|alias|...``; aliases are accepted
    when parsing and never produced when serializing.
    """
    reader = csv.DictReader(io.StringIO(text))
    expected = ["csm_id", "wikidata_item", "lang", "keyword", "label"]
    if reader.fieldnames != expected:
        raise LexiconError(f"lexicon header must be {','.join(expected)}, got {reader.fieldnames}")
    raw: dict[CsmId, dict] = {}
    languages: list[str] = []
    for lineno, row in enumerate(reader, start=2):
        try:
            cid = CsmId.parse(row["csm_id"].strip())
        except Exception as exc:
            raise LexiconError(f"line {lineno}: {exc}") from None
        lang = row["lang"].strip()
        spellings = [s.strip() for s in row["keyword"].split("|") if s.strip()]
        if not lang or not spellings:
            raise LexiconError(f"line {lineno}: empty language or keyword")
        if any(ch.isspace() for s in spellings for ch in s):
            raise LexiconError(f"line {lineno}: keywords must not contain whitespace")
        if lang not in languages:
            languages.append(lang)
        slot = raw.setdefault(cid, {"item": None, "keywords": {}, "labels": {}, "aliases": {}})
        if lang in slot["keywords"]:
            raise LexiconError(f"line {lineno}: duplicate row for {cid} in {lang!r}")
        wd = row["wikidata_item"].strip()
        if wd:
            slot["item"] = ItemId.parse(wd)
        slot["keywords"][lang] = spellings[0]
        if spellings[1:]:
            slot["aliases"][lang] = tuple(spellings[1:])
        slot["labels"][lang] = row["label"].strip() or spellings[0]
    entries = {
        cid: LexiconEntry(s["item"], s["keywords"], s["labels"], s["aliases"]) for cid, s in raw.items()
    }
    return Lexicon(entries, languages)


def load_lexicon(path: str | Path | None = None) -> Lexicon:
    if path is None:
        return default_lexicon()
    return parse_lexicon(Path(path).read_text(encoding="utf-8"))


@lru_cache(maxsize=1)
def default_lexicon() -> Lexicon:
    text = resources.files("cosmo.data").joinpath("lexicon.csv").read_text(encoding="utf-8")
    return parse_lexicon(text)
