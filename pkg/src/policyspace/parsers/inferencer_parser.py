"""Parser for value-inferencer definitions (`.vi` files).

    [Plan: support
      [AgeGroup=under21; ProcessFairness=ok -> None]
      [AgeGroup=workForce; ProcessFairness=flawed -> L1]
    ]

Each inferencer names its target slot, a mode (support or comply), and an
ordered list of anchor rows. `#` starts a line comment.
"""

from __future__ import annotations

from ..inference import COMPLY, SUPPORT, AnchorTerm, InferencerRow, ValueInferencer
from .scanner import Scanner


def parse_value_inferencers(source: str, file: str | None = None) -> list[ValueInferencer]:
    s = Scanner(source, file)
    inferencers: list[ValueInferencer] = []
    s.skip_ws()
    while not s.eof:
        inferencers.append(_parse_inferencer(s))
        s.skip_ws()
    return inferencers


def _parse_inferencer(s: Scanner) -> ValueInferencer:
    pos = s.pos()
    s.expect("[", "'[' opening an inferencer")
    s.skip_ws()
    target = _read_dim_ref(s)
    s.skip_ws()
    s.expect(":", "':' after the target slot")
    s.skip_ws()
    mode, mode_pos = s.read_ident("mode")
    if mode not in (SUPPORT, COMPLY):
        raise s.error(f"mode must be 'support' or 'comply', got '{mode}'", mode_pos)

    rows: list[InferencerRow] = []
    while True:
        s.skip_ws()
        if s.startswith("]"):
            s.advance()
            break
        if not s.startswith("["):
            raise s.error(f"expected a row '[...]' or ']', found {s.peek()!r}")
        rows.append(_parse_row(s))
    if not rows:
        raise s.error(f"inferencer '{target}' has an empty row list", pos)
    return ValueInferencer(target, mode, rows, pos)


def _parse_row(s: Scanner) -> InferencerRow:
    pos = s.pos()
    s.expect("[")
    terms: list[AnchorTerm] = []
    while True:
        s.skip_ws()
        term_pos = s.pos()
        slot = _read_dim_ref(s)
        s.skip_ws()
        s.expect("=", "'=' in an anchor term")
        s.skip_ws()
        value, _ = s.read_ident("value")
        terms.append(AnchorTerm(slot, value, term_pos))
        s.skip_ws()
        if s.startswith(";"):
            s.advance()
            continue
        s.expect("->", "';' or '->'")
        break
    s.skip_ws()
    value, _ = s.read_ident("target value")
    s.skip_ws()
    s.expect("]", "']' closing the row")
    return InferencerRow(terms, value, pos)


def _read_dim_ref(s: Scanner) -> str:
    name, _ = s.read_ident("slot name")
    parts = [name]
    while s.startswith("/"):
        s.advance()
        seg, _ = s.read_ident("path segment")
        parts.append(seg)
    return "/".join(parts)
