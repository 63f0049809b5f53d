"""Policy spaces, locations, the per-dimension order, and join semantics.

A policy space is a discrete multi-dimensional space; each point describes one
situation under the modeled policy. Dimensions are ordinal. Every dimension
carries an implicit bottom coordinate ("unset", index 0) below the first
declared value, so monotone updates always have a least element to start from.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

ATOMIC = "atomic"
AGGREGATE = "aggregate"
COMPOUND = "compound"
TODO = "todo"

UNSET = 0

EQUAL = "equal"
LESS = "less"
GREATER = "greater"
INCOMPARABLE = "incomparable"


class SpaceMismatchError(ValueError):
    """Two locations (or a predicate and a location) belong to different spaces."""


@dataclass(frozen=True, eq=True)
class SlotDefinition:
    """One named element of a space definition.

    atomic/aggregate slots carry declared values in order; compound slots
    carry child slot names; todo slots are placeholders with neither.
    """

    name: str
    kind: str
    values: tuple[str, ...] = ()
    children: tuple[str, ...] = ()
    remark: str | None = None
    value_remarks: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind in (ATOMIC, AGGREGATE):
            if not self.values:
                raise ValueError(f"slot {self.name}: {self.kind} slot needs at least one value")
            if len(set(self.values)) != len(self.values):
                raise ValueError(f"slot {self.name}: duplicate value names")
        elif self.kind == COMPOUND:
            if not self.children:
                raise ValueError(f"slot {self.name}: compound slot needs at least one child")
        elif self.kind == TODO:
            if self.values or self.children:
                raise ValueError(f"slot {self.name}: todo slot takes no values or children")
        else:
            raise ValueError(f"slot {self.name}: unknown kind {self.kind!r}")


@dataclass(frozen=True, eq=True)
class Dimension:
    """One ordinal dimension derived from the slot tree.

    `path` is the slot path from the root (aggregate members get one extra
    path segment), which keeps dimension identity stable and unambiguous.
    Index 0 is the implicit unset bottom; declared values occupy 1..n.
    """

    path: str
    slot_name: str
    values: tuple[str, ...]
    aggregate_member: str | None = None

    @property
    def size(self) -> int:
        # effective coordinate count, bottom included
        return len(self.values) + 1

    def value_index(self, value: str) -> int:
        try:
            return self.values.index(value) + 1
        except ValueError:
            raise KeyError(f"dimension {self.path} has no value {value!r}") from None

    def value_name(self, index: int) -> str | None:
        if index == UNSET:
            return None
        return self.values[index - 1]


class PolicySpace:
    """The slot tree plus the ordered dimensions it induces."""

    def __init__(self, root: str, slots: Mapping[str, SlotDefinition]):
        self.root = root
        self.slots: dict[str, SlotDefinition] = dict(slots)
        self._check_tree()
        self.dimensions: tuple[Dimension, ...] = tuple(self._derive_dimensions())
        self._dim_by_path = {d.path: i for i, d in enumerate(self.dimensions)}
        self._dims_by_slot: dict[str, list[int]] = {}
        self._slot_paths: dict[str, str] = {}
        for i, d in enumerate(self.dimensions):
            self._dims_by_slot.setdefault(d.slot_name, []).append(i)
        for path in self._iter_slot_paths(self.root, self.root):
            self._slot_paths[path.rsplit("/", 1)[-1]] = path

    def _check_tree(self) -> None:
        if self.root not in self.slots:
            raise ValueError(f"root slot {self.root!r} is not defined")
        seen: set[str] = set()

        def walk(name: str) -> None:
            if name in seen:
                raise ValueError(f"slot {name!r} referenced more than once (slot graph must be a tree)")
            seen.add(name)
            slot = self.slots.get(name)
            if slot is None:
                raise ValueError(f"unknown slot {name!r}")
            for child in slot.children:
                walk(child)

        walk(self.root)
        unreached = set(self.slots) - seen
        if unreached:
            raise ValueError(f"slots not reachable from root: {sorted(unreached)}")

    def _iter_slot_paths(self, name: str, path: str):
        yield path
        for child in self.slots[name].children:
            yield from self._iter_slot_paths(child, f"{path}/{child}")

    def _derive_dimensions(self) -> Iterable[Dimension]:
        def walk(name: str, path: str):
            slot = self.slots[name]
            if slot.kind == ATOMIC:
                yield Dimension(path, name, slot.values)
            elif slot.kind == AGGREGATE:
                # an aggregate with k members desugars to k boolean dimensions
                for member in slot.values:
                    yield Dimension(f"{path}/{member}", name, ("false", "true"), aggregate_member=member)
            elif slot.kind == COMPOUND:
                for child in slot.children:
                    yield from walk(child, f"{path}/{child}")
            # todo slots contribute no dimensions

        yield from walk(self.root, self.root)

    # -- lookups ---------------------------------------------------------

    def slot_path(self, name: str) -> str:
        path = self._slot_paths.get(name)
        if path is None:
            raise KeyError(f"unknown slot {name!r}")
        return path

    def dim_index(self, path: str) -> int:
        idx = self._dim_by_path.get(path)
        if idx is None:
            raise KeyError(f"unknown dimension {path!r}")
        return idx

    def dims_of_slot(self, name: str) -> list[int]:
        return list(self._dims_by_slot.get(name, []))

    def atomic_dim(self, slot_name: str) -> int:
        slot = self.slots.get(slot_name)
        if slot is None or slot.kind != ATOMIC:
            raise KeyError(f"{slot_name!r} is not an atomic slot")
        return self._dims_by_slot[slot_name][0]

    def member_dim(self, slot_name: str, member: str) -> int:
        slot = self.slots.get(slot_name)
        if slot is None or slot.kind != AGGREGATE:
            raise KeyError(f"{slot_name!r} is not an aggregate slot")
        path = f"{self.slot_path(slot_name)}/{member}"
        if member not in slot.values:
            raise KeyError(f"aggregate {slot_name} has no member {member!r}")
        return self.dim_index(path)

    def resolve_dimension(self, ref: str) -> int:
        """Resolve a bare slot name, a slot path, or a member path to a dimension."""
        if ref in self._dim_by_path:
            return self._dim_by_path[ref]
        if "/" in ref:
            head, tail = ref.rsplit("/", 1)
            base = head.rsplit("/", 1)[-1]
            slot = self.slots.get(base)
            if slot is not None and slot.kind == AGGREGATE and tail in slot.values:
                return self.member_dim(base, tail)
            slot = self.slots.get(tail)
            if slot is not None and slot.kind == ATOMIC:
                return self.atomic_dim(tail)
            raise KeyError(f"cannot resolve dimension reference {ref!r}")
        slot = self.slots.get(ref)
        if slot is not None and slot.kind == ATOMIC:
            return self.atomic_dim(ref)
        raise KeyError(f"cannot resolve dimension reference {ref!r}")

    def bottom(self) -> "Location":
        return Location(self, (UNSET,) * len(self.dimensions))

    def location(self, **coords: str) -> "Location":
        """Build a location from value names keyed by slot name or dimension path."""
        indices = [UNSET] * len(self.dimensions)
        for ref, value in coords.items():
            i = self.resolve_dimension(ref)
            indices[i] = self.dimensions[i].value_index(value)
        return Location(self, tuple(indices))

    def total_coordinates(self) -> int:
        """Sum of declared coordinate counts; bounds any monotone update chain."""
        return sum(len(d.values) for d in self.dimensions)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PolicySpace)
            and self.root == other.root
            and self.slots == other.slots
        )

    def __repr__(self) -> str:
        return f"PolicySpace(root={self.root!r}, dimensions={len(self.dimensions)})"


def _require_same_space(a, b) -> None:
    if a.space is not b.space and a.space != b.space:
        raise SpaceMismatchError("locations belong to different policy spaces")


@dataclass(frozen=True)
class Location:
    """A per-dimension coordinate vector; the evolving case state."""

    space: PolicySpace = field(compare=False)
    coordinates: tuple[int, ...] = ()

    def __post_init__(self):
        dims = self.space.dimensions
        if len(self.coordinates) != len(dims):
            raise ValueError(
                f"expected {len(dims)} coordinates, got {len(self.coordinates)}"
            )
        for i, c in enumerate(self.coordinates):
            if not (0 <= c < dims[i].size):
                raise ValueError(f"coordinate {c} out of range for dimension {dims[i].path}")

    def get(self, ref: str) -> int:
        return self.coordinates[self.space.resolve_dimension(ref)]

    def value_of(self, ref: str) -> str | None:
        i = self.space.resolve_dimension(ref)
        return self.space.dimensions[i].value_name(self.coordinates[i])

    def with_coordinate(self, dim: int, index: int) -> "Location":
        coords = list(self.coordinates)
        coords[dim] = index
        return Location(self.space, tuple(coords))

    def is_bottom(self) -> bool:
        return all(c == UNSET for c in self.coordinates)

    def describe(self) -> dict[str, str]:
        """Dimension path -> value name for every non-bottom coordinate."""
        out = {}
        for d, c in zip(self.space.dimensions, self.coordinates):
            if c != UNSET:
                out[d.path] = d.values[c - 1]
        return out


def compare(a: Location, b: Location) -> str:
    """Partial-order relation between two locations of the same space."""
    _require_same_space(a, b)
    le = all(x <= y for x, y in zip(a.coordinates, b.coordinates))
    ge = all(x >= y for x, y in zip(a.coordinates, b.coordinates))
    if le and ge:
        return EQUAL
    if le:
        return LESS
    if ge:
        return GREATER
    return INCOMPARABLE


def join(a: Location, b: Location) -> Location:
    """Per-dimension maximum; the monotone update primitive."""
    _require_same_space(a, b)
    return Location(a.space, tuple(max(x, y) for x, y in zip(a.coordinates, b.coordinates)))


@dataclass(frozen=True)
class PartialLocation:
    """Coordinates for a subset of dimensions; unmentioned dimensions are unconstrained."""

    space: PolicySpace = field(compare=False)
    coords: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        dims = self.space.dimensions
        for i, c in self.coords.items():
            if not (0 <= i < len(dims)) or not (0 <= c < dims[i].size):
                raise ValueError(f"invalid partial coordinate {i}={c}")

    def as_location(self) -> Location:
        """Full location with unset bottoms at unconstrained dimensions."""
        indices = [UNSET] * len(self.space.dimensions)
        for i, c in self.coords.items():
            indices[i] = c
        return Location(self.space, tuple(indices))

    def describe(self) -> dict[str, str]:
        dims = self.space.dimensions
        return {
            dims[i].path: dims[i].values[c - 1] if c != UNSET else "(unset)"
            for i, c in sorted(self.coords.items())
        }


def _anchor_items(anchor: Location | PartialLocation):
    if isinstance(anchor, PartialLocation):
        return anchor.coords.items()
    return enumerate(anchor.coordinates)


def compliance_space_contains(anchor: Location | PartialLocation, l: Location) -> bool:
    """True iff l is at-or-above the anchor on every constrained dimension."""
    _require_same_space(anchor, l)
    return all(l.coordinates[i] >= c for i, c in _anchor_items(anchor))


def support_space_contains(anchor: Location | PartialLocation, l: Location) -> bool:
    """True iff l is at-or-below the anchor on every constrained dimension."""
    _require_same_space(anchor, l)
    return all(l.coordinates[i] <= c for i, c in _anchor_items(anchor))


MIN = "min"
MAX = "max"
ONE_OF = "one-of"


@dataclass(frozen=True)
class DimensionConstraint:
    dim: int
    kind: str  # MIN | MAX | ONE_OF
    minimum: int = 0
    maximum: int = 0
    allowed: frozenset[int] = frozenset()

    def satisfied_by(self, coordinate: int) -> bool:
        if self.kind == MIN:
            return coordinate >= self.minimum
        if self.kind == MAX:
            return coordinate <= self.maximum
        return coordinate in self.allowed


@dataclass(frozen=True)
class SubspacePredicate:
    """Conjunction of per-dimension constraints; unmentioned dimensions are unconstrained."""

    space: PolicySpace = field(compare=False)
    constraints: tuple[DimensionConstraint, ...] = ()

    def __post_init__(self):
        dims = self.space.dimensions
        for c in self.constraints:
            if not (0 <= c.dim < len(dims)):
                raise ValueError(f"constraint references unknown dimension {c.dim}")
            size = dims[c.dim].size
            bounds = {MIN: [c.minimum], MAX: [c.maximum], ONE_OF: list(c.allowed)}[c.kind]
            for v in bounds:
                if not (0 <= v < size):
                    raise ValueError(f"constraint coordinate {v} out of range for {dims[c.dim].path}")


def contains(p: SubspacePredicate, l: Location) -> bool:
    _require_same_space(p, l)
    return all(c.satisfied_by(l.coordinates[c.dim]) for c in p.constraints)


def at_least(space: PolicySpace, ref: str, value: str) -> DimensionConstraint:
    i = space.resolve_dimension(ref)
    return DimensionConstraint(i, MIN, minimum=space.dimensions[i].value_index(value))


def at_most(space: PolicySpace, ref: str, value: str) -> DimensionConstraint:
    i = space.resolve_dimension(ref)
    return DimensionConstraint(i, MAX, maximum=space.dimensions[i].value_index(value))


def exactly(space: PolicySpace, ref: str, value: str) -> DimensionConstraint:
    i = space.resolve_dimension(ref)
    return DimensionConstraint(i, ONE_OF, allowed=frozenset({space.dimensions[i].value_index(value)}))
