"""Typed decision-graph IR, control-flow threading, static checks, and DOT export.

The parsed graph keeps its nested source structure (answer bodies, section and
part bodies) so it can be pretty-printed, while assembly threads every node
with a static successor so the engine and the analyzers can walk flat chains.
Only [call]/[end] need a runtime stack; everything else is resolved here.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagnostics import ParseError, SourceDiagnostic, SourcePos, error, warning
from .space import AGGREGATE, ATOMIC, PolicySpace

ASK = "ask"
SET = "set"
CALL = "call"
CONSIDER = "consider"
SECTION = "section"
PART = "part"
END = "end"
CONTINUE = "continue"
TODO_NODE = "todo"

YES_NO = ("yes", "no")


@dataclass
class Answer:
    key: str
    body: list["Node"] = field(default_factory=list)
    implicit: bool = False
    head: str | None = None  # threaded: first body node, None = fall to ask successor


@dataclass
class ConsiderOption:
    value: str
    body: list["Node"] = field(default_factory=list)
    head: str | None = None
    pos: SourcePos = SourcePos(1, 1)


@dataclass
class Assignment:
    slot: str  # bare name or /-separated path
    op: str  # "=" or "+="
    values: list[str] = field(default_factory=list)
    pos: SourcePos = SourcePos(1, 1)


class Node:
    kind: str = ""

    def __init__(self, node_id: str, pos: SourcePos, generated_id: bool = False):
        self.id = node_id
        self.pos = pos
        self.generated_id = generated_id
        self.successor: str | None = None
        self.section_path: tuple[str, ...] = ()
        self.part_id: str | None = None

    def children(self) -> list["Node"]:
        return []

    def payload_structure(self) -> dict:
        return {}

    def structure(self) -> dict:
        """Position-free structural dump used for round-trip comparison."""
        out = {"id": self.id, "kind": self.kind}
        out.update(self.payload_structure())
        return out

    def __repr__(self) -> str:
        return f"<{self.kind} {self.id}>"


class AskNode(Node):
    kind = ASK

    def __init__(self, node_id, pos, text: str, answers: list[Answer], generated_id=False):
        super().__init__(node_id, pos, generated_id)
        self.text = text
        self.answers = answers  # declared order, as parsed
        self.prompt_answers: list[Answer] = list(answers)  # normalized at assembly

    def children(self):
        return [n for a in self.answers for n in a.body]

    def answer(self, key: str) -> Answer | None:
        for a in self.prompt_answers:
            if a.key == key:
                return a
        return None

    def payload_structure(self):
        return {
            "text": self.text,
            "answers": [
                {"key": a.key, "body": [n.structure() for n in a.body]} for a in self.answers
            ],
        }


class SetNode(Node):
    kind = SET

    def __init__(self, node_id, pos, assignments: list[Assignment], generated_id=False):
        super().__init__(node_id, pos, generated_id)
        self.assignments = assignments

    def payload_structure(self):
        return {
            "assignments": [(a.slot, a.op, tuple(a.values)) for a in self.assignments]
        }


class CallNode(Node):
    kind = CALL

    def __init__(self, node_id, pos, target: str, generated_id=False):
        super().__init__(node_id, pos, generated_id)
        self.target = target

    def payload_structure(self):
        return {"target": self.target}


class ConsiderNode(Node):
    kind = CONSIDER

    def __init__(self, node_id, pos, slot: str, options: list[ConsiderOption],
                 else_body: list[Node] | None, generated_id=False):
        super().__init__(node_id, pos, generated_id)
        self.slot = slot
        self.options = options
        self.else_body = else_body  # None = no else clause
        self.else_head: str | None = None

    def children(self):
        out = [n for o in self.options for n in o.body]
        if self.else_body:
            out.extend(self.else_body)
        return out

    def payload_structure(self):
        return {
            "slot": self.slot,
            "options": [
                {"value": o.value, "body": [n.structure() for n in o.body]} for o in self.options
            ],
            "else": None if self.else_body is None else [n.structure() for n in self.else_body],
        }


class SectionNode(Node):
    kind = SECTION

    def __init__(self, node_id, pos, title: str, body: list[Node], generated_id=False):
        super().__init__(node_id, pos, generated_id)
        self.title = title
        self.body = body
        self.body_head: str | None = None

    def children(self):
        return list(self.body)

    def payload_structure(self):
        return {"title": self.title, "body": [n.structure() for n in self.body]}


class PartNode(Node):
    kind = PART

    def __init__(self, node_id, pos, body: list[Node]):
        super().__init__(node_id, pos, generated_id=False)
        self.body = body
        self.body_head: str | None = None

    def children(self):
        return list(self.body)

    def payload_structure(self):
        return {"body": [n.structure() for n in self.body]}


class EndNode(Node):
    kind = END


class ContinueNode(Node):
    kind = CONTINUE

    def __init__(self, node_id, pos, generated_id=False):
        super().__init__(node_id, pos, generated_id)
        self.target: str | None = None
        self.in_section = False  # set by assembly; False means validation error


class TodoNode(Node):
    kind = TODO_NODE

    def __init__(self, node_id, pos, note: str, generated_id=False):
        super().__init__(node_id, pos, generated_id)
        self.note = note

    def payload_structure(self):
        return {"note": self.note}


class DecisionGraph:
    """Flattened node table plus the document-ordered top level for printing."""

    def __init__(self, top_level: list[Node]):
        self.top_level = top_level
        self.nodes: dict[str, Node] = {}
        self.parts: dict[str, PartNode] = {}
        self.sections: dict[str, SectionNode] = {}
        self.entry: str | None = None
        self._register(top_level)
        self._thread()

    # -- construction ------------------------------------------------------

    def _register(self, nodes: list[Node]) -> None:
        def visit(node: Node):
            if node.id in self.nodes:
                raise ParseError(error(f"duplicate node id '{node.id}'", node.pos))
            self.nodes[node.id] = node
            if isinstance(node, PartNode):
                self.parts[node.id] = node
            if isinstance(node, SectionNode):
                self.sections[node.id] = node
            for child in node.children():
                visit(child)

        for n in nodes:
            visit(n)

    def _thread(self) -> None:
        chain = [n for n in self.top_level if not isinstance(n, PartNode)]
        self.entry = chain[0].id if chain else None
        self._thread_chain(chain, None, (), None)
        for part in (n for n in self.top_level if isinstance(n, PartNode)):
            part.body_head = part.body[0].id if part.body else None
            self._thread_chain(part.body, None, (), part.id)

    def _thread_chain(self, nodes: list[Node], continuation: str | None,
                      sections: tuple[SectionNode, ...], part_id: str | None) -> None:
        for i, node in enumerate(nodes):
            node.successor = nodes[i + 1].id if i + 1 < len(nodes) else continuation
            node.section_path = tuple(s.id for s in sections)
            node.part_id = part_id
            if isinstance(node, AskNode):
                node.prompt_answers = _normalized_answers(node)
                for answer in node.answers:
                    answer.head = answer.body[0].id if answer.body else None
                    self._thread_chain(answer.body, node.successor, sections, part_id)
            elif isinstance(node, ConsiderNode):
                for option in node.options:
                    option.head = option.body[0].id if option.body else None
                    self._thread_chain(option.body, node.successor, sections, part_id)
                if node.else_body is not None:
                    node.else_head = node.else_body[0].id if node.else_body else None
                    self._thread_chain(node.else_body, node.successor, sections, part_id)
            elif isinstance(node, SectionNode):
                node.body_head = node.body[0].id if node.body else None
                self._thread_chain(node.body, node.successor, sections + (node,), part_id)
            elif isinstance(node, ContinueNode):
                if sections:
                    node.in_section = True
                    node.target = sections[-1].successor

    # -- structure ----------------------------------------------------------

    def structure(self) -> list[dict]:
        return [n.structure() for n in self.top_level]

    def node(self, node_id: str) -> Node:
        return self.nodes[node_id]

    def __repr__(self) -> str:
        return f"DecisionGraph(nodes={len(self.nodes)}, entry={self.entry!r})"


def _normalized_answers(ask: AskNode) -> list[Answer]:
    """Complete a yes/no question missing one of its two answers.

    The implicit answer has an empty body (control falls to the successor) and
    the prompt order is fixed to yes-then-no so clients see a stable pair.
    """
    keys = [a.key for a in ask.answers]
    if set(keys) == {"yes"} or set(keys) == {"no"}:
        missing = "no" if keys == ["yes"] else "yes"
        completed = ask.answers + [Answer(missing, [], implicit=True)]
        return sorted(completed, key=lambda a: YES_NO.index(a.key))
    return list(ask.answers)


# ---------------------------------------------------------------------------
# static validation


def _resolve_slot(space: PolicySpace, ref: str):
    name = ref.rsplit("/", 1)[-1]
    slot = space.slots.get(name)
    if slot is None:
        return None
    if "/" in ref:
        try:
            if space.slot_path(name) != ref:
                return None
        except KeyError:
            return None
    return slot


def validate(graph: DecisionGraph, space: PolicySpace) -> list[SourceDiagnostic]:
    """Static checks; errors make the model non-executable, warnings do not."""
    diags: list[SourceDiagnostic] = []
    if graph.entry is None:
        diags.append(error("graph has no entry node (only parts defined)", SourcePos(1, 1)))

    for node in graph.nodes.values():
        if isinstance(node, CallNode):
            if node.target not in graph.parts:
                if node.target in graph.nodes:
                    diags.append(error(
                        f"[call] target '{node.target}' is not a part", node.pos))
                else:
                    diags.append(error(
                        f"[call] target '{node.target}' does not exist", node.pos))
        elif isinstance(node, SetNode):
            for a in node.assignments:
                diags.extend(_check_assignment(space, a))
        elif isinstance(node, ConsiderNode):
            diags.extend(_check_consider(space, node))
        elif isinstance(node, ContinueNode) and not node.in_section:
            diags.append(error("[continue] outside any section", node.pos))

    reachable = _reachable_nodes(graph)
    for node_id in sorted(graph.nodes):
        if node_id not in reachable:
            diags.append(warning(f"unreachable node '{node_id}'", graph.nodes[node_id].pos))

    for part_id in sorted(graph.parts):
        part = graph.parts[part_id]
        if _part_can_fall_off(graph, part):
            diags.append(warning(
                f"part '{part_id}' can fall off its end without an [end] node", part.pos))
    return diags


def _check_assignment(space: PolicySpace, a: Assignment) -> list[SourceDiagnostic]:
    slot = _resolve_slot(space, a.slot)
    if slot is None:
        return [error(f"unknown slot '{a.slot}' in [set]", a.pos)]
    if a.op == "=":
        if slot.kind != ATOMIC:
            return [error(f"'=' assignment on non-atomic slot '{a.slot}' (use '+=' for aggregates)", a.pos)]
        if a.values[0] not in slot.values:
            return [error(f"slot '{a.slot}' has no value '{a.values[0]}'", a.pos)]
    else:
        if slot.kind != AGGREGATE:
            return [error(f"'+=' assignment on non-aggregate slot '{a.slot}'", a.pos)]
        return [
            error(f"aggregate '{a.slot}' has no member '{v}'", a.pos)
            for v in a.values if v not in slot.values
        ]
    return []


def _check_consider(space: PolicySpace, node: ConsiderNode) -> list[SourceDiagnostic]:
    slot = _resolve_slot(space, node.slot)
    if slot is None:
        return [error(f"unknown slot '{node.slot}' in [consider]", node.pos)]
    if slot.kind != ATOMIC:
        return [error(f"[consider] requires an atomic slot, got {slot.kind} '{node.slot}'", node.pos)]
    diags = [
        error(f"slot '{node.slot}' has no value '{o.value}'", o.pos)
        for o in node.options if o.value not in slot.values
    ]
    covered = {o.value for o in node.options}
    uncovered = [v for v in slot.values if v not in covered]
    if node.else_body is None and uncovered:
        diags.append(warning(
            f"[consider] on '{node.slot}' leaves values uncovered (fall through): "
            + ", ".join(uncovered), node.pos))
    return diags


def _exits(graph: DecisionGraph, node: Node) -> list[str | None]:
    if isinstance(node, EndNode):
        return []
    if isinstance(node, ContinueNode):
        return [node.target]
    if isinstance(node, AskNode):
        return [a.head if a.head is not None else node.successor for a in node.prompt_answers]
    if isinstance(node, ConsiderNode):
        out = [o.head if o.head is not None else node.successor for o in node.options]
        if node.else_body is not None:
            out.append(node.else_head if node.else_head is not None else node.successor)
        else:
            out.append(node.successor)
        return out
    if isinstance(node, SectionNode):
        return [node.body_head if node.body_head is not None else node.successor]
    return [node.successor]


def _reachable_nodes(graph: DecisionGraph) -> set[str]:
    seen: set[str] = set()
    frontier = [graph.entry] if graph.entry else []
    while frontier:
        node_id = frontier.pop()
        if node_id is None or node_id in seen:
            continue
        seen.add(node_id)
        node = graph.nodes.get(node_id)
        if node is None:
            continue
        for nxt in _exits(graph, node):
            if nxt is not None and nxt not in seen:
                frontier.append(nxt)
        if isinstance(node, CallNode) and node.target in graph.parts:
            part = graph.parts[node.target]
            seen.add(part.id)
            if part.body_head is not None and part.body_head not in seen:
                frontier.append(part.body_head)
    return seen


def _lexical_nodes(node: Node) -> list[Node]:
    out = [node]
    for child in node.children():
        out.extend(_lexical_nodes(child))
    return out


def _part_can_fall_off(graph: DecisionGraph, part: PartNode) -> bool:
    if not part.body:
        return True
    for node in (n for top in part.body for n in _lexical_nodes(top)):
        if None in _exits(graph, node):
            return True
    return False


# ---------------------------------------------------------------------------
# TODO / unused-entity report


@dataclass
class TodoReport:
    todo_nodes: list[dict]
    todo_slots: list[str]
    unused_dimensions: list[str]
    unused_values: list[str]  # "<dimension-or-slot path>/<value>"

    def to_dict(self) -> dict:
        return {
            "todoNodes": self.todo_nodes,
            "todoSlots": self.todo_slots,
            "unusedDimensions": self.unused_dimensions,
            "unusedValues": self.unused_values,
        }

    def to_text(self) -> str:
        lines = ["TODO report", "==========="]
        lines.append(f"[todo] nodes ({len(self.todo_nodes)}):")
        for t in self.todo_nodes:
            lines.append(f"  {t['id']} at {t['position']}: {t['note']}")
        lines.append(f"TODO slots ({len(self.todo_slots)}): " + (", ".join(self.todo_slots) or "-"))
        lines.append(f"never-written dimensions ({len(self.unused_dimensions)}):")
        for d in self.unused_dimensions:
            lines.append(f"  {d}")
        lines.append(f"never-used values ({len(self.unused_values)}):")
        for v in self.unused_values:
            lines.append(f"  {v}")
        return "\n".join(lines)


def todo_report(graph: DecisionGraph, space: PolicySpace, inferencers=()) -> TodoReport:
    todo_nodes = [
        {"id": n.id, "note": n.note, "position": str(n.pos)}
        for n in graph.nodes.values() if isinstance(n, TodoNode)
    ]
    todo_nodes.sort(key=lambda t: t["id"])
    todo_slots = sorted(name for name, s in space.slots.items() if s.kind == "todo")

    written_dims: set[int] = set()
    used_values: set[tuple[str, str]] = set()  # (slot name, declared value or member)

    def mark_dim(ref: str) -> None:
        try:
            written_dims.add(space.resolve_dimension(ref))
        except KeyError:
            pass

    for node in graph.nodes.values():
        if isinstance(node, SetNode):
            for a in node.assignments:
                name = a.slot.rsplit("/", 1)[-1]
                if a.op == "=":
                    mark_dim(a.slot)
                    used_values.add((name, a.values[0]))
                else:
                    for v in a.values:
                        mark_dim(f"{name}/{v}")
                        used_values.add((name, v))
        elif isinstance(node, ConsiderNode):
            name = node.slot.rsplit("/", 1)[-1]
            for o in node.options:
                used_values.add((name, o.value))

    for inf in inferencers:
        mark_dim(inf.target)
        target_name = inf.target.rsplit("/", 1)[-1]
        for row in inf.rows:
            used_values.add((target_name, row.value))
            for term in row.terms:
                try:
                    dim = space.dimensions[space.resolve_dimension(term.slot)]
                except KeyError:
                    continue
                if dim.aggregate_member is not None:
                    used_values.add((dim.slot_name, dim.aggregate_member))
                else:
                    used_values.add((dim.slot_name, term.value))

    unused_dimensions = [
        d.path for i, d in enumerate(space.dimensions) if i not in written_dims
    ]

    unused_values = []
    for name, slot in space.slots.items():
        if slot.kind not in (ATOMIC, AGGREGATE):
            continue
        for v in slot.values:
            if (name, v) not in used_values:
                unused_values.append(f"{space.slot_path(name)}/{v}")

    return TodoReport(todo_nodes, todo_slots, unused_dimensions, unused_values)


# ---------------------------------------------------------------------------
# DOT export


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def export_dot(graph: DecisionGraph, include_section_clusters: bool = False) -> str:
    """Deterministic GraphViz text: one DOT node per IR node, answer-labeled edges."""
    lines = ["digraph decision_graph {", "  rankdir=TB;", '  node [shape=box, fontname="Helvetica"];']

    def node_decl(node: Node, indent: str = "  ") -> str:
        return f'{indent}"{_dot_escape(node.id)}" [label="{_dot_escape(node.id)}\\n{node.kind}"];'

    emitted: set[str] = set()
    if include_section_clusters:
        # direct members: nodes whose innermost enclosing section is this one
        members: dict[str, list[Node]] = {}
        for node in graph.nodes.values():
            if node.section_path:
                members.setdefault(node.section_path[-1], []).append(node)

        def emit_cluster(section: SectionNode, indent: str) -> None:
            lines.append(f'{indent}subgraph "cluster_{_dot_escape(section.id)}" {{')
            lines.append(f'{indent}  label="{_dot_escape(section.title or section.id)}";')
            lines.append(node_decl(section, indent + "  "))
            emitted.add(section.id)
            for member in sorted(members.get(section.id, []), key=lambda m: m.id):
                if isinstance(member, SectionNode):
                    emit_cluster(member, indent + "  ")
                else:
                    lines.append(node_decl(member, indent + "  "))
                    emitted.add(member.id)
            lines.append(f"{indent}}}")

        top_sections = [n for n in graph.nodes.values()
                        if isinstance(n, SectionNode) and not n.section_path]
        for section in sorted(top_sections, key=lambda s: s.id):
            emit_cluster(section, "  ")

    for node_id in sorted(graph.nodes):
        if node_id not in emitted:
            lines.append(node_decl(graph.nodes[node_id]))

    def edge(src: str, dst: str | None, label: str | None = None, style: str | None = None):
        if dst is None:
            return
        attrs = []
        if label is not None:
            attrs.append(f'label="{_dot_escape(label)}"')
        if style is not None:
            attrs.append(f"style={style}")
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f'  "{_dot_escape(src)}" -> "{_dot_escape(dst)}"{suffix};')

    for node_id in sorted(graph.nodes):
        node = graph.nodes[node_id]
        if isinstance(node, AskNode):
            for a in node.prompt_answers:
                edge(node.id, a.head if a.head is not None else node.successor, label=a.key)
        elif isinstance(node, ConsiderNode):
            for o in node.options:
                edge(node.id, o.head if o.head is not None else node.successor, label=o.value)
            if node.else_body is not None:
                edge(node.id, node.else_head if node.else_head is not None else node.successor,
                     label="else")
            else:
                edge(node.id, node.successor)
        elif isinstance(node, CallNode):
            edge(node.id, node.target if node.target in graph.nodes else None,
                 label="call", style="dashed")
            edge(node.id, node.successor)
        elif isinstance(node, SectionNode):
            edge(node.id, node.body_head if node.body_head is not None else node.successor)
        elif isinstance(node, PartNode):
            edge(node.id, node.body_head)
        elif isinstance(node, ContinueNode):
            edge(node.id, node.target)
        elif isinstance(node, EndNode):
            pass
        else:
            edge(node.id, node.successor)

    lines.append("}")
    return "\n".join(lines) + "\n"
