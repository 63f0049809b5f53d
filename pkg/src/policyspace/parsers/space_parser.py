"""Parser for policy-space definitions (`.ps` files).

Statement forms, each terminated by `.`:

    Name: consists of A, B.      compound slot
    Name: one of v1, v2.         atomic slot
    Name: some of v1, v2.        aggregate slot
    Name: TODO.                  placeholder slot

`#` starts a line comment; `<--` starts a remark running to the end of the
line, attached to the nearest preceding name. The root is the unique slot no
other slot references.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..diagnostics import ParseError, SourcePos, error
from ..space import AGGREGATE, ATOMIC, COMPOUND, TODO, PolicySpace, SlotDefinition
from .scanner import Scanner, collapse_ws


@dataclass
class _RawSlot:
    name: str
    kind: str
    pos: SourcePos
    items: list[tuple[str, SourcePos]] = field(default_factory=list)
    remark: str | None = None
    item_remarks: dict[str, str] = field(default_factory=dict)


class _SpaceScanner(Scanner):
    """Adds remark handling: `<--` attaches to the most recent name."""

    def __init__(self, text: str, file: str | None = None):
        super().__init__(text, file)
        self.on_remark = None  # callback(str)

    def skip_ws(self, comments: bool = True) -> None:
        while True:
            super().skip_ws(comments)
            if self.startswith("<--"):
                pos = self.pos()
                self.advance(3)
                remark = collapse_ws(self.read_to_eol())
                if self.on_remark is None:
                    raise self.error("remark without a preceding name", pos)
                self.on_remark(remark)
            else:
                return


def parse_policy_space(source: str, file: str | None = None) -> PolicySpace:
    """Parse `.ps` text; raises ParseError with a positioned diagnostic."""
    raws = _parse_statements(source, file)
    return _build_space(raws)


def _parse_statements(source: str, file: str | None) -> list[_RawSlot]:
    s = _SpaceScanner(source, file)
    raws: list[_RawSlot] = []
    s.skip_ws()
    while not s.eof:
        raws.append(_parse_statement(s))
        s.skip_ws()
    if not raws:
        raise s.error("policy space defines no slots", SourcePos(1, 1, file))
    return raws


def _parse_statement(s: _SpaceScanner) -> _RawSlot:
    name, pos = s.read_ident("slot name")
    raw = _RawSlot(name=name, kind="", pos=pos)

    def slot_remark(text: str) -> None:
        raw.remark = text if raw.remark is None else f"{raw.remark} {text}"

    s.on_remark = slot_remark
    s.skip_ws()
    s.expect(":", "':' after slot name")
    s.skip_ws()

    if s.startswith("TODO"):
        s.advance(4)
        raw.kind = TODO
        s.skip_ws()
        s.expect(".", "'.' ending the statement")
        return raw

    for keyword, kind in (("consists of", COMPOUND), ("one of", ATOMIC), ("some of", AGGREGATE)):
        if s.startswith(keyword):
            s.advance(len(keyword))
            raw.kind = kind
            break
    else:
        raise s.error("expected 'consists of', 'one of', 'some of', or 'TODO'")

    while True:
        s.skip_ws()
        item, item_pos = s.read_ident("name")
        raw.items.append((item, item_pos))

        def item_remark(text: str, _item=item) -> None:
            prev = raw.item_remarks.get(_item)
            raw.item_remarks[_item] = text if prev is None else f"{prev} {text}"

        s.on_remark = item_remark
        s.skip_ws()
        if s.startswith(","):
            s.advance()
            continue
        s.expect(".", "',' or '.'")
        return raw


def _build_space(raws: list[_RawSlot]) -> PolicySpace:
    by_name: dict[str, _RawSlot] = {}
    for raw in raws:
        if raw.name in by_name:
            raise ParseError(error(f"duplicate slot name '{raw.name}'", raw.pos))
        by_name[raw.name] = raw

    # duplicate values within a slot
    for raw in raws:
        seen: set[str] = set()
        for item, pos in raw.items:
            if item in seen:
                label = "child" if raw.kind == COMPOUND else "value"
                raise ParseError(error(
                    f"duplicate {label} '{item}' in slot '{raw.name}'", pos))
            seen.add(item)

    # child references must resolve, and each slot may be referenced once
    referenced: dict[str, SourcePos] = {}
    for raw in raws:
        if raw.kind != COMPOUND:
            continue
        for child, pos in raw.items:
            if child not in by_name:
                raise ParseError(error(
                    f"slot '{raw.name}' references unknown slot '{child}'", pos))
            if child in referenced:
                raise ParseError(error(
                    f"slot '{child}' is referenced more than once", pos))
            referenced[child] = pos

    _check_cycles(raws, by_name)

    roots = [raw for raw in raws if raw.name not in referenced]
    if len(roots) != 1:
        names = ", ".join(r.name for r in roots) or "(none)"
        raise ParseError(error(
            f"expected exactly one root slot, found {len(roots)}: {names}", raws[0].pos))

    slots = {
        raw.name: SlotDefinition(
            name=raw.name,
            kind=raw.kind,
            values=tuple(i for i, _ in raw.items) if raw.kind in (ATOMIC, AGGREGATE) else (),
            children=tuple(i for i, _ in raw.items) if raw.kind == COMPOUND else (),
            remark=raw.remark,
            value_remarks=dict(raw.item_remarks),
        )
        for raw in raws
    }
    return PolicySpace(roots[0].name, slots)


def _check_cycles(raws: list[_RawSlot], by_name: dict[str, _RawSlot]) -> None:
    visiting: set[str] = set()
    done: set[str] = set()

    def walk(name: str) -> None:
        visiting.add(name)
        raw = by_name[name]
        if raw.kind == COMPOUND:
            for child, pos in raw.items:
                if child in visiting:
                    raise ParseError(error(
                        f"slot cycle: '{name}' references '{child}' which leads back to it",
                        pos))
                if child not in done:
                    walk(child)
        visiting.discard(name)
        done.add(name)

    for raw in raws:
        if raw.name not in done:
            walk(raw.name)
