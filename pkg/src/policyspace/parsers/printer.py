"""Pretty-printers for the three DSLs.

Printing a parsed model and re-parsing it yields a structurally identical IR:
the printers emit nodes in document order, omit generated ids (the re-parse
regenerates the same ordinals), and keep remarks on their own line ends.
"""

from __future__ import annotations

from ..graph import (
    AskNode,
    CallNode,
    ConsiderNode,
    ContinueNode,
    DecisionGraph,
    EndNode,
    Node,
    PartNode,
    SectionNode,
    SetNode,
    TodoNode,
)
from ..inference import ValueInferencer
from ..space import AGGREGATE, ATOMIC, COMPOUND, PolicySpace, SlotDefinition

_KIND_KEYWORD = {COMPOUND: "consists of", ATOMIC: "one of", AGGREGATE: "some of"}


def format_policy_space(space: PolicySpace) -> str:
    return "\n".join(_format_slot(space.slots[name]) for name in space.slots) + "\n"


def _format_slot(slot: SlotDefinition) -> str:
    if slot.kind == "todo":
        if slot.remark:
            return f"{slot.name}: <-- {slot.remark}\n  TODO."
        return f"{slot.name}: TODO."
    items = slot.values if slot.kind in (ATOMIC, AGGREGATE) else slot.children
    keyword = _KIND_KEYWORD[slot.kind]
    if slot.remark is None and not slot.value_remarks:
        return f"{slot.name}: {keyword} {', '.join(items)}."
    lines = [f"{slot.name}:" + (f" <-- {slot.remark}" if slot.remark else "")]
    lines.append(f"  {keyword}")
    for i, item in enumerate(items):
        mark = "," if i + 1 < len(items) else "."
        remark = slot.value_remarks.get(item)
        lines.append(f"    {item}{mark}" + (f" <-- {remark}" if remark else ""))
    return "\n".join(lines)


def format_decision_graph(graph: DecisionGraph) -> str:
    return "\n".join(_format_node(n, 0) for n in graph.top_level) + "\n"


def _id_prefix(node: Node) -> str:
    return "" if node.generated_id else f">{node.id}< "


def _format_body(nodes: list[Node], depth: int) -> str:
    return "\n".join(_format_node(n, depth) for n in nodes)


def _format_node(node: Node, depth: int) -> str:
    pad = "  " * depth
    inner = "  " * (depth + 1)
    if isinstance(node, AskNode):
        lines = [f"{pad}[{_id_prefix(node)}ask:", f"{inner}{{text: {node.text}}}", f"{inner}{{answers:"]
        for i, answer in enumerate(node.answers):
            body = ""
            if answer.body:
                body = "\n" + _format_body(answer.body, depth + 3)
            close = "}}]" if i + 1 == len(node.answers) else "}"
            lines.append(f"{inner}  {{{answer.key}:{body}{close}")
        return "\n".join(lines)
    if isinstance(node, SetNode):
        parts = []
        for a in node.assignments:
            if a.op == "=":
                parts.append(f"{a.slot}={a.values[0]}")
            else:
                parts.append(f"{a.slot}+={', '.join(a.values)}")
        return f"{pad}[{_id_prefix(node)}set: {'; '.join(parts)}]"
    if isinstance(node, CallNode):
        return f"{pad}[{_id_prefix(node)}call: {node.target}]"
    if isinstance(node, ConsiderNode):
        lines = [f"{pad}[{_id_prefix(node)}consider:", f"{inner}{{slot: {node.slot}}}", f"{inner}{{options:"]
        for i, option in enumerate(node.options):
            body = ""
            if option.body:
                body = "\n" + _format_body(option.body, depth + 3)
            close = "}}" if i + 1 == len(node.options) else "}"
            lines.append(f"{inner}  {{{option.value}:{body}{close}")
        if node.else_body is not None:
            body = ""
            if node.else_body:
                body = "\n" + _format_body(node.else_body, depth + 2)
            lines.append(f"{inner}{{else:{body}}}]")
        else:
            lines[-1] += "]"
        return "\n".join(lines)
    if isinstance(node, SectionNode):
        lines = [f"{pad}[{_id_prefix(node)}section:", f"{inner}{{title: {node.title}}}"]
        if node.body:
            lines.append(_format_body(node.body, depth + 1))
        lines[-1] += "]"
        return "\n".join(lines)
    if isinstance(node, PartNode):
        lines = [f"{pad}[-->{node.id}<"]
        if node.body:
            lines.append(_format_body(node.body, depth + 1))
        lines.append(f"{pad}--]")
        return "\n".join(lines)
    if isinstance(node, EndNode):
        return f"{pad}[{_id_prefix(node)}end]"
    if isinstance(node, ContinueNode):
        return f"{pad}[{_id_prefix(node)}continue]"
    if isinstance(node, TodoNode):
        note = f" {node.note}" if node.note else ""
        return f"{pad}[{_id_prefix(node)}todo:{note}]"
    raise TypeError(f"unknown node type {type(node).__name__}")


def format_value_inferencers(inferencers: list[ValueInferencer]) -> str:
    blocks = []
    for inf in inferencers:
        lines = [f"[{inf.target}: {inf.mode}"]
        for row in inf.rows:
            terms = "; ".join(f"{t.slot}={t.value}" for t in row.terms)
            lines.append(f"  [{terms} -> {row.value}]")
        lines.append("]")
        blocks.append("\n".join(lines))
    return "\n".join(blocks) + "\n"
