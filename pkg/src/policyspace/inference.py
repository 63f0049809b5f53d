"""Value inferencers: monotone derivation of one slot's coordinate from others.

An inferencer is an ascending chain of partial anchor locations, each paired
with a value of the target slot. Support mode reads the value off the first
anchor at-or-above the case location; comply mode reads it off the last anchor
at-or-below. All inferencers run to fixpoint after every coordinate update,
joining inferred values in (updates never move a coordinate down).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagnostics import SourceDiagnostic, SourcePos, error
from .space import (
    ATOMIC,
    Location,
    PartialLocation,
    PolicySpace,
    compliance_space_contains,
    join,
    support_space_contains,
)

SUPPORT = "support"
COMPLY = "comply"


@dataclass
class AnchorTerm:
    slot: str  # dimension reference as written (bare name or path)
    value: str
    pos: SourcePos = field(default=SourcePos(1, 1), compare=False)


@dataclass
class InferencerRow:
    terms: list[AnchorTerm]
    value: str  # target-slot value
    pos: SourcePos = field(default=SourcePos(1, 1), compare=False)


@dataclass
class ValueInferencer:
    target: str
    mode: str  # SUPPORT | COMPLY
    rows: list[InferencerRow]
    pos: SourcePos = field(default=SourcePos(1, 1), compare=False)


@dataclass
class BoundInferencer:
    """Inferencer resolved against a space: anchors as partial locations."""

    source: ValueInferencer
    target_dim: int
    anchors: list[PartialLocation]
    values: list[int]  # target coordinate index per row

    @property
    def mode(self) -> str:
        return self.source.mode


def bind(inferencer: ValueInferencer, space: PolicySpace) -> tuple[BoundInferencer | None, list[SourceDiagnostic]]:
    """Resolve names and check the chain invariants; diagnostics on failure."""
    diags: list[SourceDiagnostic] = []
    target_slot = space.slots.get(inferencer.target.rsplit("/", 1)[-1])
    if target_slot is None or target_slot.kind != ATOMIC:
        diags.append(error(
            f"inferencer target '{inferencer.target}' is not an atomic slot", inferencer.pos))
        return None, diags
    target_dim = space.atomic_dim(target_slot.name)

    if not inferencer.rows:
        diags.append(error(f"inferencer '{inferencer.target}' has no rows", inferencer.pos))
        return None, diags

    anchors: list[PartialLocation] = []
    values: list[int] = []
    for row in inferencer.rows:
        coords: dict[int, int] = {}
        ok = True
        for term in row.terms:
            try:
                dim_idx = space.resolve_dimension(term.slot)
            except KeyError:
                diags.append(error(f"unknown dimension '{term.slot}' in inferencer anchor", term.pos))
                ok = False
                continue
            if dim_idx == target_dim:
                diags.append(error(
                    f"inferencer '{inferencer.target}' references its own target in an anchor",
                    term.pos))
                ok = False
                continue
            dim = space.dimensions[dim_idx]
            try:
                coords[dim_idx] = dim.value_index(term.value)
            except KeyError:
                diags.append(error(
                    f"dimension '{dim.path}' has no value '{term.value}'", term.pos))
                ok = False
        if row.value not in target_slot.values:
            diags.append(error(
                f"target slot '{target_slot.name}' has no value '{row.value}'", row.pos))
            ok = False
        if not ok:
            continue
        anchors.append(PartialLocation(space, coords))
        values.append(target_slot.values.index(row.value) + 1)

    if diags:
        return None, diags

    # every row must constrain the same dimension set: the chain is a series
    # of locations in one subspace, which keeps qualifying-anchor sets
    # contiguous along the chain
    base_dims = frozenset(anchors[0].coords)
    for i in range(1, len(anchors)):
        if frozenset(anchors[i].coords) != base_dims:
            diags.append(error(
                f"inferencer '{inferencer.target}' row {i + 1} constrains a different "
                "dimension set than row 1", inferencer.rows[i].pos))
    if diags:
        return None, diags

    # chain check: each anchor sits strictly inside the previous one's
    # compliance space
    for i in range(1, len(anchors)):
        prev = anchors[i - 1].as_location()
        cur = anchors[i].as_location()
        if not (compliance_space_contains(prev, cur) and cur != prev):
            diags.append(error(
                f"inferencer '{inferencer.target}' row {i + 1} does not extend row {i}: "
                "anchors must strictly ascend", inferencer.rows[i].pos))
    if diags:
        return None, diags
    return BoundInferencer(inferencer, target_dim, anchors, values), diags


def infer_once(bound: BoundInferencer, l: Location) -> int | None:
    """Target coordinate inferred at l, or None when no anchor qualifies.

    The qualifying-anchor set is contiguous in the chain; asserted here rather
    than trusted.
    """
    if bound.mode == SUPPORT:
        hits = [i for i, a in enumerate(bound.anchors) if support_space_contains(a, l)]
        if not hits:
            return None
        assert hits == list(range(hits[0], hits[0] + len(hits))), "support hits not contiguous"
        return bound.values[hits[0]]
    hits = [i for i, a in enumerate(bound.anchors) if compliance_space_contains(a, l)]
    if not hits:
        return None
    assert hits == list(range(hits[0], hits[0] + len(hits))), "comply hits not contiguous"
    return bound.values[hits[-1]]


def infer_value(bound: BoundInferencer, l: Location) -> str | None:
    """Like infer_once but returns the value name."""
    idx = infer_once(bound, l)
    if idx is None:
        return None
    return l.space.dimensions[bound.target_dim].values[idx - 1]


def apply_fixpoint(inferencers: list[BoundInferencer], l: Location) -> Location:
    """Join inferred values into l until a full pass changes nothing.

    Terminates because every effective pass strictly increases the coordinate
    sum, which is bounded by the space's total declared coordinate count.
    """
    if not inferencers:
        return l
    bound_passes = l.space.total_coordinates() + 1
    for _ in range(bound_passes):
        before = l
        for inf in inferencers:
            idx = infer_once(inf, l)
            if idx is not None and idx > l.coordinates[inf.target_dim]:
                l = l.with_coordinate(inf.target_dim, idx)
        if l == before:
            return l
    raise AssertionError("inference fixpoint did not settle within the coordinate bound")
