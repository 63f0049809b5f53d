"""Exhaustive outcome enumeration and subspace queries.

The enumerator is its own walker over the IR (it does not reuse the engine),
branching at every ask answer; every witness transcript it records can be
replayed through the engine as a cross-check. Branch state is cloned rather
than backtracked in place; desk-scale models make that affordable.
"""

from __future__ import annotations

import json
import re
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
from .model import PolicyModel
from .space import (
    MIN,
    ONE_OF,
    DimensionConstraint,
    Location,
    PolicySpace,
    SubspacePredicate,
    contains,
    join,
)

DEFAULT_MAX_PATHS = 100_000
_STACK_LIMIT = 64


class EnumerationFault(RuntimeError):
    """The walker hit an internal inconsistency (validated models never do)."""


@dataclass
class Outcome:
    location: Location
    count: int
    witness: list[tuple[str, str]]  # (node id, answer) pairs replaying to location

    def to_dict(self) -> dict:
        return {
            "location": self.location.describe(),
            "paths": self.count,
            "witness": [{"node": n, "answer": a} for n, a in self.witness],
        }


@dataclass
class OutcomeSet:
    outcomes: list[Outcome]
    total_paths: int
    partial: bool = False

    def to_dict(self) -> dict:
        return {
            "outcomes": [o.to_dict() for o in self.outcomes],
            "totalPaths": self.total_paths,
            "partial": self.partial,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2)

    def to_text(self) -> str:
        lines = [f"{len(self.outcomes)} distinct location(s), {self.total_paths} path(s)"
                 + (" [partial]" if self.partial else "")]
        for o in self.outcomes:
            coords = ", ".join(f"{k}={v}" for k, v in o.location.describe().items()) or "(bottom)"
            answers = ", ".join(a for _, a in o.witness) or "(none)"
            lines.append(f"  {coords}")
            lines.append(f"    paths: {o.count}  witness answers: {answers}")
        return "\n".join(lines)


@dataclass
class _SimState:
    current: str | None
    location: Location
    call_stack: tuple[tuple[str, str | None], ...] = ()
    transcript: tuple[tuple[str, str], ...] = ()


def enumerate_outcomes(model: PolicyModel, max_paths: int = DEFAULT_MAX_PATHS) -> OutcomeSet:
    """Depth-first traversal of every answer sequence, engine semantics exact."""
    if not model.is_valid:
        raise ValueError(f"model '{model.id}' has validation errors")
    graph = model.graph
    space = model.space
    inferencers = model.bound_inferencers

    start_location = apply_fixpoint(inferencers, space.bottom())
    stack = [_SimState(graph.entry, start_location)]
    finished: dict[tuple[int, ...], Outcome] = {}
    paths = 0
    partial = False

    while stack:
        if paths >= max_paths:
            partial = True
            break
        state = stack.pop()
        state = _run_to_ask(model, state)
        if state.current is None:
            paths += 1
            key = state.location.coordinates
            existing = finished.get(key)
            if existing is None:
                finished[key] = Outcome(state.location, 1, list(state.transcript))
            else:
                existing.count += 1
            continue
        node = graph.nodes[state.current]
        if not isinstance(node, AskNode):
            raise EnumerationFault(f"stopped at non-ask node '{node.id}'")
        # push in reverse so the first declared answer is explored first
        for answer in reversed(node.prompt_answers):
            nxt = answer.head if answer.head is not None else node.successor
            stack.append(_SimState(
                nxt, state.location, state.call_stack,
                state.transcript + ((node.id, answer.key),)))

    outcomes = sorted(finished.values(), key=lambda o: o.location.coordinates)
    return OutcomeSet(outcomes, paths, partial)


def _run_to_ask(model: PolicyModel, state: _SimState) -> _SimState:
    """Advance through computer-handled nodes until an ask or completion."""
    graph = model.graph
    space = model.space
    current = state.current
    location = state.location
    call_stack = list(state.call_stack)
    steps = 0
    budget = (len(graph.nodes) + 1) * (_STACK_LIMIT + 2) + 1000

    while True:
        steps += 1
        if steps > budget:
            raise EnumerationFault("step budget exceeded")
        if current is None:
            if call_stack:
                _, current = call_stack.pop()
                continue
            return _SimState(None, location, tuple(call_stack), state.transcript)
        node = graph.nodes[current]
        if isinstance(node, AskNode):
            return _SimState(current, location, tuple(call_stack), state.transcript)
        if isinstance(node, SetNode):
            location = apply_fixpoint(
                model.bound_inferencers, join(location, _assignment_delta(space, node)))
            current = node.successor
        elif isinstance(node, CallNode):
            if len(call_stack) >= _STACK_LIMIT:
                raise EnumerationFault(f"call stack overflow at '{node.id}'")
            call_stack.append((node.target, node.successor))
            current = graph.parts[node.target].body_head
        elif isinstance(node, EndNode):
            if call_stack:
                _, current = call_stack.pop()
            else:
                return _SimState(None, location, tuple(call_stack), state.transcript)
        elif isinstance(node, ContinueNode):
            current = node.target
        elif isinstance(node, SectionNode):
            current = node.body_head if node.body_head is not None else node.successor
        elif isinstance(node, ConsiderNode):
            current = _consider_branch(space, node, location)
        elif isinstance(node, TodoNode):
            current = node.successor
        elif isinstance(node, PartNode):
            raise EnumerationFault(f"fell through into part '{node.id}'")
        else:
            raise EnumerationFault(f"unknown node kind '{node.kind}'")


def _assignment_delta(space: PolicySpace, node: SetNode) -> Location:
    coords = [0] * len(space.dimensions)
    for a in node.assignments:
        name = a.slot.rsplit("/", 1)[-1]
        if a.op == "=":
            dim = space.atomic_dim(name)
            coords[dim] = max(coords[dim], space.dimensions[dim].value_index(a.values[0]))
        else:
            for v in a.values:
                dim = space.member_dim(name, v)
                coords[dim] = max(coords[dim], space.dimensions[dim].value_index("true"))
    return Location(space, tuple(coords))


def _consider_branch(space: PolicySpace, node: ConsiderNode, location: Location) -> str | None:
    name = node.slot.rsplit("/", 1)[-1]
    dim = space.atomic_dim(name)
    current_value = space.dimensions[dim].value_name(location.coordinates[dim])
    for option in node.options:
        if option.value == current_value:
            return option.head if option.head is not None else node.successor
    if node.else_body is not None:
        return node.else_head if node.else_head is not None else node.successor
    return node.successor


# ---------------------------------------------------------------------------
# queries


class PredicateError(ValueError):
    """The predicate text cannot be parsed against the model's space."""


_TERM_RE = re.compile(
    r"^\s*(?P<slot>[A-Za-z_][\w\-/]*)\s*"
    r"(?:(?P<op>>=|=)\s*(?P<value>[A-Za-z_][\w\-]*)"
    r"|(?P<contains>\s+contains\s+)(?P<member>[A-Za-z_][\w\-]*))\s*$")


def parse_predicate(text: str, space: PolicySpace) -> SubspacePredicate:
    """`Slot=value`, `Slot>=value`, and `Agg contains value`, joined by AND."""
    constraints: list[DimensionConstraint] = []
    for raw_term in re.split(r"\s+AND\s+", text.strip(), flags=re.IGNORECASE):
        if not raw_term.strip():
            raise PredicateError("empty predicate term")
        m = _TERM_RE.match(raw_term)
        if m is None:
            raise PredicateError(f"cannot parse predicate term {raw_term.strip()!r}")
        slot = m.group("slot")
        if m.group("contains"):
            member = m.group("member")
            ref = f"{slot.rsplit('/', 1)[-1]}/{member}"
            try:
                dim = space.resolve_dimension(ref)
            except KeyError as exc:
                raise PredicateError(str(exc)) from exc
            constraints.append(DimensionConstraint(
                dim, MIN, minimum=space.dimensions[dim].value_index("true")))
            continue
        try:
            dim = space.resolve_dimension(slot)
            index = space.dimensions[dim].value_index(m.group("value"))
        except KeyError as exc:
            raise PredicateError(str(exc)) from exc
        if m.group("op") == ">=":
            constraints.append(DimensionConstraint(dim, MIN, minimum=index))
        else:
            constraints.append(DimensionConstraint(dim, ONE_OF, allowed=frozenset({index})))
    return SubspacePredicate(space, tuple(constraints))


def query(model: PolicyModel, predicate: SubspacePredicate | str,
          max_paths: int = DEFAULT_MAX_PATHS) -> OutcomeSet:
    """Outcome set restricted to locations inside the predicate's subspace."""
    if isinstance(predicate, str):
        predicate = parse_predicate(predicate, model.space)
    full = enumerate_outcomes(model, max_paths)
    matched = [o for o in full.outcomes if contains(predicate, o.location)]
    return OutcomeSet(matched, sum(o.count for o in matched), full.partial)
