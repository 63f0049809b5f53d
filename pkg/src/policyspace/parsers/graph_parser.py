"""Parser for decision-graph definitions (`.dg` files).

Node forms:

    [>id< ask: {text: ...} {answers: {answerText: nodes...} ...}]
    [set: Slot=value; Agg+=v1, v2]
    [call: partId]
    [>id< consider: {slot: S} {options: {v: nodes} ...} {else: nodes}]
    [>id< section: {title: ...} nodes...]
    [-->id< nodes... --]
    [end]  [continue]  [todo: note]

The `>id<` marker is optional on every node; nodes without one get generated
ids `_n<ordinal>` numbered by the position of their opening bracket across the
manifest-ordered sources. Parts may appear only at the top level of a file.
"""

from __future__ import annotations

from typing import Sequence

from ..diagnostics import SourcePos
from ..graph import (
    Answer,
    AskNode,
    Assignment,
    CallNode,
    ConsiderNode,
    ConsiderOption,
    ContinueNode,
    DecisionGraph,
    EndNode,
    Node,
    PartNode,
    SectionNode,
    SetNode,
    TodoNode,
)
from .scanner import Scanner, collapse_ws


class _IdGen:
    def __init__(self):
        self.ordinal = 0

    def next(self) -> str:
        self.ordinal += 1
        return f"_n{self.ordinal}"


def parse_decision_graph(sources: Sequence[str | tuple[str, str]]) -> DecisionGraph:
    """Parse one or more `.dg` sources (manifest order) into a single graph."""
    if not sources:
        raise ValueError("at least one decision-graph source is required")
    ids = _IdGen()
    top: list[Node] = []
    for entry in sources:
        name, text = entry if isinstance(entry, tuple) else (None, entry)
        s = Scanner(text, name)
        s.skip_ws()
        while not s.eof:
            if not s.startswith("["):
                raise s.error(f"expected a node, found {s.peek()!r}")
            top.append(_parse_node(s, ids, allow_part=True))
            s.skip_ws()
    return DecisionGraph(top)


def _parse_node(s: Scanner, ids: _IdGen, allow_part: bool = False) -> Node:
    pos = s.pos()
    s.expect("[")
    s.skip_ws()

    if s.startswith("-->"):
        if not allow_part:
            raise s.error("parts are only allowed at the top level", pos)
        s.advance(3)
        s.skip_ws()
        part_id, _ = s.read_ident("part id")
        s.skip_ws()
        s.expect("<", "'<' closing the part id")
        body = _parse_node_list(s, ids, stop="--")
        s.expect("--]", "'--]' closing the part")
        return PartNode(part_id, pos, body)

    node_id = None
    generated = False
    if s.startswith(">"):
        s.advance()
        s.skip_ws()
        node_id, _ = s.read_ident("node id")
        s.skip_ws()
        s.expect("<", "'<' closing the node id")
        s.skip_ws()
    if node_id is None:
        node_id = ids.next()
        generated = True

    keyword, kw_pos = s.read_ident("node type")
    if keyword == "end":
        s.skip_ws()
        s.expect("]")
        return EndNode(node_id, pos, generated)
    if keyword == "continue":
        s.skip_ws()
        s.expect("]")
        return ContinueNode(node_id, pos, generated)

    s.skip_ws()
    s.expect(":", f"':' after '{keyword}'")
    if keyword == "ask":
        return _parse_ask(s, ids, node_id, pos, generated)
    if keyword == "set":
        return _parse_set(s, node_id, pos, generated)
    if keyword == "call":
        s.skip_ws()
        target, _ = s.read_ident("part id")
        s.skip_ws()
        s.expect("]")
        return CallNode(node_id, pos, target, generated)
    if keyword == "consider":
        return _parse_consider(s, ids, node_id, pos, generated)
    if keyword == "section":
        return _parse_section(s, ids, node_id, pos, generated)
    if keyword == "todo":
        note = collapse_ws(_read_until(s, "]"))
        s.expect("]")
        return TodoNode(node_id, pos, note, generated)
    raise s.error(f"unknown node type '{keyword}'", kw_pos)


def _parse_node_list(s: Scanner, ids: _IdGen, stop: str) -> list[Node]:
    nodes: list[Node] = []
    while True:
        s.skip_ws()
        if s.eof:
            raise s.error(f"unexpected end of input, expected {stop!r} (unbalanced brackets?)")
        if s.startswith(stop):
            return nodes
        if not s.startswith("["):
            raise s.error(f"expected a node or {stop!r}, found {s.peek()!r}")
        nodes.append(_parse_node(s, ids))


def _read_until(s: Scanner, terminator: str) -> str:
    start = s.i
    while not s.eof and not s.startswith(terminator):
        s.advance()
    if s.eof:
        raise s.error(f"unexpected end of input, expected {terminator!r}")
    return s.text[start:s.i]


def _read_text_block(s: Scanner, keyword: str) -> str:
    """Parse `{keyword: free text}` tracking brace nesting; text is ws-collapsed."""
    s.skip_ws()
    s.expect("{", f"'{{{keyword}: ...}}' block")
    s.skip_ws()
    s.expect(keyword)
    s.skip_ws()
    s.expect(":", f"':' after '{keyword}'")
    depth = 1
    start = s.i
    while not s.eof:
        ch = s.peek()
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth == 0:
                text = s.text[start:s.i]
                s.advance()
                return collapse_ws(text)
        s.advance()
    raise s.error("unexpected end of input inside a text block (unbalanced braces?)")


def _read_answer_key(s: Scanner) -> tuple[str, SourcePos]:
    s.skip_ws()
    pos = s.pos()
    start = s.i
    while not s.eof and s.peek() not in ":{}[]\n":
        s.advance()
    if s.peek() != ":":
        raise s.error("expected an answer key followed by ':'", pos)
    key = collapse_ws(s.text[start:s.i])
    if not key:
        raise s.error("empty answer key", pos)
    s.advance()
    return key, pos


def _parse_ask(s: Scanner, ids: _IdGen, node_id: str, pos: SourcePos, generated: bool) -> AskNode:
    text = _read_text_block(s, "text")
    s.skip_ws()
    s.expect("{", "'{answers: ...}' block")
    s.skip_ws()
    s.expect("answers")
    s.skip_ws()
    s.expect(":", "':' after 'answers'")
    answers: list[Answer] = []
    seen: set[str] = set()
    while True:
        s.skip_ws()
        if s.startswith("}"):
            s.advance()
            break
        s.expect("{", "an '{answer: ...}' entry or '}'")
        key, key_pos = _read_answer_key(s)
        if key in seen:
            raise s.error(f"duplicate answer '{key}'", key_pos)
        seen.add(key)
        body = _parse_node_list(s, ids, stop="}")
        s.expect("}")
        answers.append(Answer(key, body))
    if not answers:
        raise s.error("ask node needs at least one answer", pos)
    s.skip_ws()
    s.expect("]", "']' closing the ask node")
    return AskNode(node_id, pos, text, answers, generated)


def _parse_set(s: Scanner, node_id: str, pos: SourcePos, generated: bool) -> SetNode:
    assignments: list[Assignment] = []
    while True:
        s.skip_ws()
        slot_pos = s.pos()
        slot = _read_dim_ref(s)
        s.skip_ws()
        if s.startswith("+="):
            s.advance(2)
            values = []
            while True:
                s.skip_ws()
                value, _ = s.read_ident("value")
                values.append(value)
                s.skip_ws()
                if s.startswith(","):
                    s.advance()
                    continue
                break
            assignments.append(Assignment(slot, "+=", values, slot_pos))
        else:
            s.expect("=", "'=' or '+='")
            s.skip_ws()
            value, _ = s.read_ident("value")
            assignments.append(Assignment(slot, "=", [value], slot_pos))
        s.skip_ws()
        if s.startswith(";"):
            s.advance()
            continue
        s.expect("]", "';' or ']'")
        return SetNode(node_id, pos, assignments, generated)


def _read_dim_ref(s: Scanner) -> str:
    name, _ = s.read_ident("slot name")
    parts = [name]
    while s.startswith("/"):
        s.advance()
        seg, _ = s.read_ident("path segment")
        parts.append(seg)
    return "/".join(parts)


def _parse_consider(s: Scanner, ids: _IdGen, node_id: str, pos: SourcePos,
                    generated: bool) -> ConsiderNode:
    s.skip_ws()
    s.expect("{", "'{slot: ...}' block")
    s.skip_ws()
    s.expect("slot")
    s.skip_ws()
    s.expect(":", "':' after 'slot'")
    s.skip_ws()
    slot = _read_dim_ref(s)
    s.skip_ws()
    s.expect("}", "'}' closing the slot block")
    s.skip_ws()
    s.expect("{", "'{options: ...}' block")
    s.skip_ws()
    s.expect("options")
    s.skip_ws()
    s.expect(":", "':' after 'options'")
    options: list[ConsiderOption] = []
    while True:
        s.skip_ws()
        if s.startswith("}"):
            s.advance()
            break
        s.expect("{", "an '{option: ...}' entry or '}'")
        s.skip_ws()
        value, value_pos = s.read_ident("option value")
        s.skip_ws()
        s.expect(":", "':' after the option value")
        body = _parse_node_list(s, ids, stop="}")
        s.expect("}")
        options.append(ConsiderOption(value, body, pos=value_pos))
    if not options:
        raise s.error("consider node needs at least one option", pos)
    else_body: list[Node] | None = None
    s.skip_ws()
    if s.startswith("{"):
        s.advance()
        s.skip_ws()
        s.expect("else")
        s.skip_ws()
        s.expect(":", "':' after 'else'")
        else_body = _parse_node_list(s, ids, stop="}")
        s.expect("}")
        s.skip_ws()
        if s.startswith("{"):
            raise s.error("consider allows at most one else block")
    s.expect("]", "']' closing the consider node")
    return ConsiderNode(node_id, pos, slot, options, else_body, generated)


def _parse_section(s: Scanner, ids: _IdGen, node_id: str, pos: SourcePos,
                   generated: bool) -> SectionNode:
    title = _read_text_block(s, "title")
    body = _parse_node_list(s, ids, stop="]")
    s.expect("]")
    return SectionNode(node_id, pos, title, body, generated)
