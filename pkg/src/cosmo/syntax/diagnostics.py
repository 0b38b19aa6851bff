from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class ParseDiagnostic:
    severity: Severity
    span: tuple[int, int]
    message: str
    expected: tuple[str, ...] | None = None

    def __str__(self) -> str:
        line, col = self.span
        text = f"{line}:{col}: {self.severity.value}: {self.message}"
        if self.expected:
            text += f" (expected {' or '.join(self.expected)})"
        return text
