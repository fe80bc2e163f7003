"""Lattice valued cells: information only grows, and conflict is top.

Merging follows the information order: ``a.meet(b)`` holds everything known
by either side. Bottom means nothing is known yet, top means the cell was
told contradictory things.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, IntEnum, IntFlag
from typing import Any, Protocol, runtime_checkable

from .store import CellId, VarStore
from .utils import Naming, cell_name, render_value


class LatticeDomainError(ValueError):
    """Two lattice values from different domains were merged."""


class ConstraintError(ValueError):
    """A value lacks a capability its store requires."""


@runtime_checkable
class LatticeValue(Protocol):
    """What ``merge_write`` needs from a cell value."""

    @property
    def is_bottom(self) -> bool: ...

    @property
    def is_top(self) -> bool: ...

    def meet(self, other: Any) -> Any: ...


class FlatKind(IntEnum):
    UNKNOWN = 0
    VALUE = 1
    CONFLICT = 2


@dataclass(frozen=True)
class Flat:
    """Flat lattice over an equatable domain: unknown < value < conflict."""

    kind: FlatKind
    value: Any = None

    @classmethod
    def unknown(cls) -> Flat:
        return cls(FlatKind.UNKNOWN)

    @classmethod
    def of(cls, value: Any) -> Flat:
        return cls(FlatKind.VALUE, value)

    @classmethod
    def conflict(cls) -> Flat:
        return cls(FlatKind.CONFLICT)

    @property
    def is_bottom(self) -> bool:
        return self.kind == FlatKind.UNKNOWN

    @property
    def is_top(self) -> bool:
        return self.kind == FlatKind.CONFLICT

    def meet(self, other: Flat) -> Flat:
        """Combine the information of two flat values.

        :raises LatticeDomainError: If ``other`` is not a flat value of the
            same value type.
        """
        if not isinstance(other, Flat):
            raise LatticeDomainError(f"Cannot merge {self} with {other!r}.")
        if self.is_bottom:
            return other
        if other.is_bottom:
            return self
        if self.is_top:
            return self
        if other.is_top:
            return other
        # bool is an int subclass; True must not merge with 1
        if type(self.value) is not type(other.value):
            raise LatticeDomainError(f"Cannot merge {self} with {other}.")
        return self if self.value == other.value else Flat.conflict()

    def render(self, naming: Naming = cell_name) -> str:
        if self.kind == FlatKind.UNKNOWN:
            return "unknown"
        if self.kind == FlatKind.CONFLICT:
            return "conflict"
        return render_value(self.value, naming)

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class CandidateSet:
    """Finite set of still possible values; merging intersects.

    Bottom is the whole domain, top is the empty set.
    """

    candidates: frozenset[Any]
    domain: frozenset[Any]

    def __post_init__(self) -> None:
        if not self.candidates <= self.domain:
            raise LatticeDomainError(
                f"Candidates {set(self.candidates)} are not within the domain."
            )

    @classmethod
    def full(cls, domain: Any) -> CandidateSet:
        domain = frozenset(domain)
        return cls(domain, domain)

    @classmethod
    def of(cls, domain: Any, *values: Any) -> CandidateSet:
        return cls(frozenset(values), frozenset(domain))

    @property
    def is_bottom(self) -> bool:
        return self.candidates == self.domain

    @property
    def is_top(self) -> bool:
        return not self.candidates

    @property
    def value(self) -> Any:
        """The single remaining candidate, or None."""
        if len(self.candidates) == 1:
            return next(iter(self.candidates))
        return None

    def meet(self, other: CandidateSet) -> CandidateSet:
        """Keep only the candidates both sides still allow.

        :raises LatticeDomainError: If the domains differ.
        """
        if not isinstance(other, CandidateSet) or other.domain != self.domain:
            raise LatticeDomainError(f"Cannot merge {self} with {other!r}.")
        return CandidateSet(self.candidates & other.candidates, self.domain)

    def render(self, naming: Naming = cell_name) -> str:
        items = sorted((render_value(v, naming) for v in self.candidates))
        return "{" + ",".join(items) + "}"

    def __str__(self) -> str:
        return self.render()


def refines(new: Any, old: Any) -> bool:
    """True when ``new`` holds at least the information of ``old``."""
    return bool(old.meet(new) == new)


class MergeOutcome(Enum):
    UNCHANGED = "unchanged"
    GREW = "grew"
    CONFLICT = "conflict"


def merge_write(store: VarStore, cell: CellId, value: Any) -> MergeOutcome:
    """Merge ``value`` into the lattice value held by ``cell``.

    Nothing is written when the merge adds no information. When the old
    value already carried information it is read through ``store`` before
    writing, so a recording store lists it among the reasons of the write.

    :param store: Store holding the cell (a session records reasons).
    :param cell: A cell holding a lattice value.
    :param value: Lattice value of the same domain.
    :returns: Whether the cell was unchanged, grew, or became a conflict.
    :raises LatticeDomainError: If the domains differ.
    """
    old = store.peek(cell)
    if not isinstance(old, LatticeValue):
        raise LatticeDomainError(f"Cell {cell} does not hold a lattice value.")
    merged = old.meet(value)
    if merged == old:
        return MergeOutcome.UNCHANGED
    if not old.is_bottom:
        store.read(cell)
    store.write(cell, merged)
    return MergeOutcome.CONFLICT if merged.is_top else MergeOutcome.GREW


def is_conflict(store: VarStore, cell: CellId) -> bool:
    """True iff the cell holds top. Does not count as a read."""
    return bool(store.peek(cell).is_top)


class Capability(IntFlag):
    """Capabilities a constrained store can require of its values."""

    RENDER = 1
    EQ = 2
    LATTICE = 4


def _has_capability(value: Any, capability: Capability) -> bool:
    kind = type(value)
    if capability == Capability.RENDER:
        return (
            isinstance(value, bool)
            or callable(getattr(value, "render", None))
            or kind.__str__ is not object.__str__
            or kind.__repr__ is not object.__repr__
        )
    if capability == Capability.EQ:
        if kind.__eq__ is object.__eq__:
            return False
        try:
            hash(value)
        except TypeError:
            return False
        return True
    return isinstance(value, LatticeValue)


@dataclass(frozen=True)
class ValueConstraint:
    """Set of capabilities every stored value must have."""

    capabilities: Capability = Capability.RENDER | Capability.EQ | Capability.LATTICE

    def missing(self, value: Any) -> list[Capability]:
        return [
            c
            for c in (Capability.RENDER, Capability.EQ, Capability.LATTICE)
            if c in self.capabilities and not _has_capability(value, c)
        ]

    def check(self, value: Any) -> None:
        """Raise if ``value`` lacks a required capability.

        :raises ConstraintError: Naming the missing capabilities.
        """
        missing = self.missing(value)
        if missing:
            names = ", ".join(str(c.name) for c in missing)
            raise ConstraintError(
                f"Value {value!r} of type {type(value).__name__} lacks: {names}."
            )


class ConstrainedStore:
    """Store wrapper that only accepts values satisfying a constraint.

    With ``merging`` set (and lattice values required) a write merges the
    new value into the old one instead of replacing it.
    """

    def __init__(
        self,
        inner: VarStore,
        constraint: ValueConstraint | None = None,
        *,
        merging: bool = False,
    ) -> None:
        self.inner = inner
        self.constraint = constraint if constraint is not None else ValueConstraint()
        if merging and Capability.LATTICE not in self.constraint.capabilities:
            raise ConstraintError("Merging writes require lattice values.")
        self.merging = merging

    def alloc(self, value: Any) -> CellId:
        self.constraint.check(value)
        return self.inner.alloc(value)

    def read(self, cell: CellId) -> Any:
        return self.inner.read(cell)

    def peek(self, cell: CellId) -> Any:
        return self.inner.peek(cell)

    def write(self, cell: CellId, value: Any) -> None:
        self.constraint.check(value)
        if self.merging:
            value = value.meet(self.inner.read(cell))
        self.inner.write(cell, value)
