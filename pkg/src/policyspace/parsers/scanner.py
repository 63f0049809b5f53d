"""Character scanner with 1-based position tracking, shared by the DSL parsers."""

from __future__ import annotations

import re

from ..diagnostics import ParseError, SourcePos, error

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*")


class Scanner:
    def __init__(self, text: str, file: str | None = None):
        self.text = text
        self.file = file
        self.i = 0
        self.line = 1
        self.col = 1

    @property
    def eof(self) -> bool:
        return self.i >= len(self.text)

    def pos(self) -> SourcePos:
        return SourcePos(self.line, self.col, self.file)

    def peek(self, n: int = 1) -> str:
        return self.text[self.i:self.i + n]

    def startswith(self, s: str) -> bool:
        return self.text.startswith(s, self.i)

    def advance(self, n: int = 1) -> str:
        taken = self.text[self.i:self.i + n]
        for ch in taken:
            if ch == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
        self.i += len(taken)
        return taken

    def skip_ws(self, comments: bool = True) -> None:
        while not self.eof:
            ch = self.peek()
            if ch in " \t\r\n":
                self.advance()
            elif comments and ch == "#":
                while not self.eof and self.peek() != "\n":
                    self.advance()
            else:
                return

    def expect(self, token: str, what: str | None = None) -> None:
        if not self.startswith(token):
            found = self.peek(len(token)) or "end of input"
            raise self.error(f"expected {what or token!r}, found {found!r}")
        self.advance(len(token))

    def read_ident(self, what: str = "identifier") -> tuple[str, SourcePos]:
        pos = self.pos()
        m = IDENT_RE.match(self.text, self.i)
        if m is None:
            found = self.peek() or "end of input"
            raise self.error(f"expected {what}, found {found!r}", pos)
        self.advance(m.end() - m.start())
        return m.group(), pos

    def read_to_eol(self) -> str:
        start = self.i
        while not self.eof and self.peek() != "\n":
            self.advance()
        return self.text[start:self.i]

    def error(self, message: str, pos: SourcePos | None = None) -> ParseError:
        return ParseError(error(message, pos or self.pos()))


def collapse_ws(text: str) -> str:
    return re.sub(r"\s+", " ", text).strip()
