import pytest

from cosmo.errors import LexiconError, MissingEntry, NotAKeyword, UnknownLanguage
from cosmo.lexicon import (
    ALL_IDS,
    SHORTHAND_KEYWORDS,
    default_lexicon,
    lexicon_keyword,
    lexicon_lookup,
    parse_lexicon,
)
from cosmo.model import CsmId

LEX = default_lexicon()


@pytest.mark.parametrize(
    "cid, lang, word",
    [
        (7, "en", "TypeConstructor"),
        (7, "es", "ConstructorDeTipo"),
        (9, "csm", "CSM009"),
        (6, "es", "ConstructorDeInstancia"),
        (8, "es", "SubConstructorDe"),
        (2, "es", "TipoDeEntidad"),
        (3, "es", "Propiedad"),
    ],
)
def test_keyword_examples(cid, lang, word):
    assert lexicon_keyword(LEX, CsmId(cid), lang) == word


def test_lookup_examples():
    assert lexicon_lookup(LEX, "InstanciaDe", "es") == CsmId(9)
    assert lexicon_lookup(LEX, "Join", "en") == CsmId(11)
    with pytest.raises(NotAKeyword):
        lexicon_lookup(LEX, "Q42", "en")


def test_shipped_languages():
    assert set(LEX.languages) >= {"en", "es", "eu", "csm"}


@pytest.mark.parametrize("lang", LEX.languages)
def test_bijection_per_language(lang):
    words = [LEX.keyword(c, lang) for c in ALL_IDS]
    assert len(set(words)) == 14
    for c in ALL_IDS:
        assert LEX.lookup(LEX.keyword(c, lang), lang) == c


def test_aliases_accepted_not_canonical():
    assert LEX.lookup("Propriedad", "es") == CsmId(3)
    assert LEX.is_alias("Propriedad", "es")
    assert LEX.is_alias("TipoDeEntitdad", "es")
    assert not LEX.is_alias("Propiedad", "es")


def test_shorthand_fixed():
    assert set(SHORTHAND_KEYWORDS.values()) == {"TC", "IC", "SubTC", "InstOf", "Po", "Join", "IsMand"}
    assert "TC" in LEX.reserved_words()


def test_unknown_language():
    with pytest.raises(UnknownLanguage):
        LEX.keyword(CsmId(1), "xx")


HEADER = "csm_id,wikidata_item,lang,keyword,label\n"


def _rows(lang="en", skip=None):
    return "".join(f"CSM{n:03d},,{lang},K{n},K{n}\n" for n in range(1, 15) if n != skip)


def test_parse_custom_lexicon():
    lex = parse_lexicon(HEADER + _rows() + _rows("fr"))
    assert lex.keyword(CsmId(3), "fr") == "K3"


def test_incomplete_lexicon():
    with pytest.raises(MissingEntry):
        parse_lexicon(HEADER + _rows(skip=4))
    with pytest.raises(MissingEntry):
        parse_lexicon(HEADER + _rows() + _rows("fr", skip=2))


def test_bad_lexicon_files():
    with pytest.raises(LexiconError):
        parse_lexicon("id,lang\n")
    with pytest.raises(LexiconError):
        parse_lexicon(HEADER + _rows() + "CSM001,,en,Other,Other\n")
    dup = HEADER + _rows().replace("K2,K2", "K1,K1")
    with pytest.raises(LexiconError):
        parse_lexicon(dup)
