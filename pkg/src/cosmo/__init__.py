"""Tooling for CoSMo content-selection models."""

from .model import Model
from .syntax import SyntaxKind, convert, detect_syntax, parse, serialize

__version__ = "0.1.0"

__all__ = ["Model", "SyntaxKind", "convert", "detect_syntax", "parse", "serialize", "__version__"]
