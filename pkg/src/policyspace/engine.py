"""Interview engine: walks the decision graph, joins answers into the case
location, and builds the final report.

The computation is synergetic: the engine handles bookkeeping (coordinates,
control flow, inference fixpoints) and stops at every ask node for the human
answer. Coordinates only move upward, so answer order across independent
fragments cannot change the outcome.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .graph import (
    AskNode,
    CallNode,
    ConsiderNode,
    ContinueNode,
    EndNode,
    PartNode,
    SectionNode,
    SetNode,
    TodoNode,
)
from .inference import apply_fixpoint
from .localization import (
    LONG,
    NAME,
    TOOLTIP,
    LocalizationPackage,
    entity_long_text,
    localize_entity,
)
from .model import PolicyModel
from .space import AGGREGATE, ATOMIC, EQUAL, LESS, Location, compare, join

AWAITING = "awaiting-answer"
FINISHED = "finished"

DEFAULT_CALL_STACK_LIMIT = 64


class EngineFault(RuntimeError):
    """Internal invariant violated while executing a validated model."""


class UnvalidatedModelError(ValueError):
    """The model has validation errors (or was never parsed) and cannot run."""


class InvalidAnswerError(ValueError):
    """The answer text is not one of the current node's answers."""


class NotAwaitingError(RuntimeError):
    """answer() called while the session is not at an ask node."""


class NotFinishedError(RuntimeError):
    """final_report() called before the interview finished."""


class ReplayError(RuntimeError):
    """A journal does not match the model's prompts."""


@dataclass
class TranscriptEntry:
    node: str
    answer: str | None  # None for visited [todo] nodes
    kind: str = "answer"  # "answer" | "todo"

    def to_dict(self) -> dict:
        return {"node": self.node, "answer": self.answer, "kind": self.kind}


class InterviewSession:
    """One running interview; mutate from a single caller at a time."""

    def __init__(self, model: PolicyModel, call_stack_limit: int = DEFAULT_CALL_STACK_LIMIT):
        if not model.is_valid:
            raise UnvalidatedModelError(
                f"model '{model.id}' has {len(model.errors)} validation error(s)")
        self.model = model
        self.call_stack: list[tuple[str, str | None]] = []
        self.location: Location = model.space.bottom()
        self.transcript: list[TranscriptEntry] = []
        self.status = AWAITING
        self.current: str | None = model.graph.entry
        self._limit = call_stack_limit
        self._steps = 0
        self._step_budget = (len(model.graph.nodes) + 1) * (call_stack_limit + 2) + 1000
        self._update_location(apply_fixpoint(model.bound_inferencers, self.location))
        self._run()

    # -- state -------------------------------------------------------------

    @property
    def finished(self) -> bool:
        return self.status == FINISHED

    @property
    def current_node(self) -> AskNode | None:
        if self.current is None or self.status != AWAITING:
            return None
        node = self.model.graph.nodes[self.current]
        assert isinstance(node, AskNode)
        return node

    @property
    def section_stack(self) -> list[tuple[str, str | None]]:
        """Sections enclosing the current node, outermost first, with their successors."""
        if self.current is None:
            return []
        node = self.model.graph.nodes[self.current]
        return [
            (sid, self.model.graph.sections[sid].successor)
            for sid in node.section_path
        ]

    def state(self) -> dict:
        return {
            "model": self.model.id,
            "version": self.model.version,
            "status": self.status,
            "current": self.current,
            "callStack": list(self.call_stack),
            "location": list(self.location.coordinates),
            "transcript": [t.to_dict() for t in self.transcript],
        }

    # -- execution -----------------------------------------------------------

    def _update_location(self, new: Location) -> None:
        if compare(self.location, new) not in (EQUAL, LESS):
            raise EngineFault("location moved downward")
        self.location = new

    def _apply_assignments(self, node: SetNode) -> None:
        space = self.model.space
        coords = list(self.model.space.bottom().coordinates)
        for a in node.assignments:
            name = a.slot.rsplit("/", 1)[-1]
            slot = space.slots[name]
            if a.op == "=":
                dim = space.atomic_dim(name)
                coords[dim] = max(coords[dim], space.dimensions[dim].value_index(a.values[0]))
            else:
                for v in a.values:
                    dim = space.member_dim(name, v)
                    coords[dim] = max(coords[dim], space.dimensions[dim].value_index("true"))
        delta = Location(space, tuple(coords))
        self._update_location(join(self.location, delta))
        self._update_location(apply_fixpoint(self.model.bound_inferencers, self.location))

    def _run(self) -> None:
        graph = self.model.graph
        while True:
            self._steps += 1
            if self._steps > self._step_budget:
                raise EngineFault("step budget exceeded (control-flow loop?)")
            if self.current is None:
                if self.call_stack:
                    _, self.current = self.call_stack.pop()  # implicit [end]
                    continue
                self.status = FINISHED
                return
            node = graph.nodes[self.current]
            if isinstance(node, AskNode):
                self.status = AWAITING
                return
            if isinstance(node, SetNode):
                self._apply_assignments(node)
                self.current = node.successor
            elif isinstance(node, CallNode):
                if len(self.call_stack) >= self._limit:
                    raise EngineFault(f"call stack overflow at node '{node.id}'")
                part = graph.parts[node.target]
                self.call_stack.append((node.target, node.successor))
                self.current = part.body_head
            elif isinstance(node, EndNode):
                if self.call_stack:
                    _, self.current = self.call_stack.pop()
                else:
                    self.status = FINISHED
                    return
            elif isinstance(node, ContinueNode):
                self.current = node.target
            elif isinstance(node, SectionNode):
                self.current = node.body_head if node.body_head is not None else node.successor
            elif isinstance(node, ConsiderNode):
                self.current = self._consider_branch(node)
            elif isinstance(node, TodoNode):
                self.transcript.append(TranscriptEntry(node.id, None, "todo"))
                self.current = node.successor
            elif isinstance(node, PartNode):
                raise EngineFault(f"fell through into part '{node.id}'")
            else:
                raise EngineFault(f"unknown node kind '{node.kind}'")

    def _consider_branch(self, node: ConsiderNode) -> str | None:
        space = self.model.space
        name = node.slot.rsplit("/", 1)[-1]
        dim = space.atomic_dim(name)
        current_value = space.dimensions[dim].value_name(self.location.coordinates[dim])
        for option in node.options:
            if option.value == current_value:
                return option.head if option.head is not None else node.successor
        if node.else_body is not None:
            return node.else_head if node.else_head is not None else node.successor
        return node.successor

    # -- interaction ---------------------------------------------------------

    def answer(self, text: str) -> "InterviewSession":
        if self.status != AWAITING:
            raise NotAwaitingError("session is not awaiting an answer")
        node = self.current_node
        chosen = node.answer(text)
        if chosen is None:
            valid = ", ".join(a.key for a in node.prompt_answers)
            raise InvalidAnswerError(
                f"'{text}' is not an answer of node '{node.id}' (valid: {valid})")
        self.transcript.append(TranscriptEntry(node.id, text, "answer"))
        self.current = chosen.head if chosen.head is not None else node.successor
        self._run()
        return self

    def answers(self) -> list[str]:
        return [t.answer for t in self.transcript if t.kind == "answer"]


def start(model: PolicyModel, call_stack_limit: int = DEFAULT_CALL_STACK_LIMIT) -> InterviewSession:
    return InterviewSession(model, call_stack_limit)


def revise_answer(session: InterviewSession, index: int, new_answer: str) -> InterviewSession:
    """Fresh session replaying the transcript prefix, the new answer, and then
    as many of the old subsequent answers as remain valid (rest dropped)."""
    entries = session.transcript
    if not (0 <= index < len(entries)):
        raise IndexError(f"transcript index {index} out of range")
    if entries[index].kind != "answer":
        raise InvalidAnswerError(f"transcript entry {index} is not an answer")
    prefix = [e.answer for e in entries[:index] if e.kind == "answer"]
    rest = [e.answer for e in entries[index + 1:] if e.kind == "answer"]

    fresh = start(session.model, session._limit)
    for text in prefix:
        fresh.answer(text)
    fresh.answer(new_answer)
    for text in rest:
        if fresh.status != AWAITING or fresh.current_node.answer(text) is None:
            break
        fresh.answer(text)
    return fresh


# ---------------------------------------------------------------------------
# journal (replay artifact shared by CLI, service, and tests)


def journal(session: InterviewSession) -> dict:
    return {
        "model": session.model.id,
        "version": session.model.version,
        "answers": [
            {"node": t.node, "answer": t.answer}
            for t in session.transcript if t.kind == "answer"
        ],
    }


def journal_text(session: InterviewSession) -> str:
    return json.dumps(journal(session), indent=2) + "\n"


def replay(model: PolicyModel, journal_data: dict) -> InterviewSession:
    session = start(model)
    for record in journal_data.get("answers", []):
        if session.status != AWAITING:
            raise ReplayError("journal has more answers than the model asks for")
        node_id = record.get("node")
        if node_id is not None and session.current != node_id:
            raise ReplayError(
                f"journal expects node '{node_id}' but the session is at '{session.current}'")
        session.answer(record["answer"])
    return session


# ---------------------------------------------------------------------------
# final report


@dataclass
class ReportValue:
    key: str
    name: str
    tooltip: str
    long_text: str | None = None

    def to_dict(self) -> dict:
        return {"key": self.key, "name": self.name, "tooltip": self.tooltip,
                "longText": self.long_text}


@dataclass
class ReportEntry:
    path: str
    kind: str  # atomic | aggregate
    name: str
    tooltip: str
    long_text: str | None = None
    value: ReportValue | None = None
    values: list[ReportValue] = field(default_factory=list)

    def to_dict(self) -> dict:
        out = {
            "path": self.path,
            "kind": self.kind,
            "name": self.name,
            "tooltip": self.tooltip,
            "longText": self.long_text,
        }
        if self.kind == ATOMIC:
            out["value"] = self.value.to_dict() if self.value else None
        else:
            out["values"] = [v.to_dict() for v in self.values]
        return out


@dataclass
class FinalReport:
    model: str
    version: str
    locale: str | None
    entries: list[ReportEntry]

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "version": self.version,
            "locale": self.locale,
            "entries": [e.to_dict() for e in self.entries],
        }

    def to_json(self) -> str:
        """Canonical serialization; byte-identical across embeddings."""
        return json.dumps(self.to_dict(), ensure_ascii=False, sort_keys=True,
                          separators=(",", ":"))

    def to_text(self) -> str:
        if not self.entries:
            return "(no findings: every dimension is still unset)"
        lines = []
        for e in self.entries:
            if e.kind == ATOMIC:
                lines.append(f"{e.name}: {e.value.name}")
                if e.value.tooltip != e.value.name:
                    lines.append(f"    {e.value.tooltip}")
            else:
                lines.append(f"{e.name}:")
                for v in e.values:
                    lines.append(f"  - {v.name}")
                    if v.tooltip != v.name:
                        lines.append(f"    {v.tooltip}")
        return "\n".join(lines)


def final_report(session: InterviewSession,
                 package: LocalizationPackage | None = None) -> FinalReport:
    """Report every dimension above bottom, grouped in slot-tree order."""
    if session.status != FINISHED:
        raise NotFinishedError("the interview has not finished")
    model = session.model
    space = model.space
    entries: list[ReportEntry] = []

    def entity_texts(path: str) -> tuple[str, str, str | None]:
        return (
            localize_entity(package, space, path, NAME),
            localize_entity(package, space, path, TOOLTIP),
            entity_long_text(package, path),
        )

    def walk(name: str, path: str) -> None:
        slot = space.slots[name]
        if slot.kind == ATOMIC:
            dim = space.atomic_dim(name)
            coord = session.location.coordinates[dim]
            if coord > 0:
                value_key = space.dimensions[dim].values[coord - 1]
                vname, vtip, vlong = entity_texts(f"{path}/{value_key}")
                name_, tip, long_ = entity_texts(path)
                entries.append(ReportEntry(
                    path, ATOMIC, name_, tip, long_,
                    value=ReportValue(value_key, vname, vtip, vlong)))
        elif slot.kind == AGGREGATE:
            members = []
            for member in slot.values:
                dim = space.member_dim(name, member)
                if space.dimensions[dim].value_name(
                        session.location.coordinates[dim]) == "true":
                    vname, vtip, vlong = entity_texts(f"{path}/{member}")
                    members.append(ReportValue(member, vname, vtip, vlong))
            if members:
                name_, tip, long_ = entity_texts(path)
                entries.append(ReportEntry(path, AGGREGATE, name_, tip, long_, values=members))
        else:
            for child in slot.children:
                walk(child, f"{path}/{child}")

    walk(space.root, space.root)
    return FinalReport(model.id, model.version, package.locale if package else None, entries)
