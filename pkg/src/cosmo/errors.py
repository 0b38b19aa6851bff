"""Exception hierarchy shared by all cosmo modules."""

from __future__ import annotations


class CosmoError(Exception):
    pass


# identifiers and lexicon


class MalformedToken(CosmoError):
    pass


class CsmOutOfRange(MalformedToken):
    pass


class UnknownLanguage(CosmoError):
    pass


class MissingEntry(CosmoError):
    pass


class NotAKeyword(CosmoError):
    pass


class LexiconError(CosmoError):
    pass


# syntax


class ParseError(CosmoError):
    """Raised when text cannot be turned into a Model.

    ``diagnostics`` holds every error (and warning) collected before giving up.
    """

    def __init__(self, message: str, diagnostics=()):
        super().__init__(message)
        self.diagnostics = list(diagnostics)


class GrammarViolation(ParseError):
    pass


class AmbiguousLanguage(ParseError):
    pass


class Undetectable(ParseError):
    pass


# algebra


class AlgebraError(CosmoError):
    pass


class AlreadyType(AlgebraError):
    pass


class NotATypeConstructor(AlgebraError):
    pass


class UnboundType(AlgebraError):
    pass


class EmptyBindings(AlgebraError):
    pass


# knowledge graph / evaluation


class FormatError(CosmoError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class MereologyViolation(CosmoError):
    pass


class UnresolvedEndpoint(CosmoError):
    pass


class UnknownFunction(CosmoError):
    pass


class ArityMismatch(CosmoError):
    pass


# sparql


class UnsupportedFeature(CosmoError):
    pass


class EndpointError(CosmoError):
    pass


class SparqlTimeout(EndpointError):
    pass


class HttpError(EndpointError):
    def __init__(self, message: str, status: int | None = None):
        super().__init__(message)
        self.status = status


class MalformedResults(EndpointError):
    pass
