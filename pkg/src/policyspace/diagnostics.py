"""Position-carrying diagnostics shared by the parsers and validators."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class SourcePos:
    """1-based position of a token inside a source file."""

    line: int
    column: int
    file: str | None = None

    def __str__(self) -> str:
        prefix = f"{self.file}:" if self.file else ""
        return f"{prefix}{self.line}:{self.column}"


@dataclass(frozen=True)
class SourceDiagnostic:
    severity: str  # "error" | "warning"
    message: str
    pos: SourcePos = field(compare=False, default=SourcePos(1, 1))

    @property
    def line(self) -> int:
        return self.pos.line

    @property
    def column(self) -> int:
        return self.pos.column

    @property
    def file(self) -> str | None:
        return self.pos.file

    def is_error(self) -> bool:
        return self.severity == "error"

    def __str__(self) -> str:
        return f"{self.pos}: {self.severity}: {self.message}"

    def to_dict(self) -> dict:
        return {
            "severity": self.severity,
            "message": self.message,
            "file": self.pos.file,
            "line": self.pos.line,
            "column": self.pos.column,
        }


def error(message: str, pos: SourcePos) -> SourceDiagnostic:
    return SourceDiagnostic("error", message, pos)


def warning(message: str, pos: SourcePos) -> SourceDiagnostic:
    return SourceDiagnostic("warning", message, pos)


class ParseError(Exception):
    """Raised by the parsers on the first unrecoverable syntax error."""

    def __init__(self, diagnostic: SourceDiagnostic):
        super().__init__(str(diagnostic))
        self.diagnostic = diagnostic

    @property
    def diagnostics(self) -> list[SourceDiagnostic]:
        return [self.diagnostic]
