"""Read tracking: remember every value a program reads from its cells."""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from typing import Any, Callable

from .store import CellId, VarStore


@dataclass(frozen=True)
class AssignmentEntry:
    """A read: the cell and the value it held at the time.

    ``source`` is the index of the assignment event that produced the value,
    when the store keeps events; it does not take part in equality.
    """

    cell: CellId
    observed: Any
    type_tag: type
    source: int | None = field(default=None, compare=False)


@dataclass(frozen=True)
class AssignmentContainer:
    """Ordered, immutable collection of reads.

    Duplicate reads stay duplicated; consumers deduplicate if they need to.
    """

    entries: tuple[AssignmentEntry, ...] = ()

    @classmethod
    def singleton(cls, entry: AssignmentEntry) -> AssignmentContainer:
        return cls((entry,))

    def merge(self, other: AssignmentContainer) -> AssignmentContainer:
        """Concatenate two containers, ``self`` first."""
        return AssignmentContainer(self.entries + other.entries)

    __or__ = merge

    def cells(self) -> list[CellId]:
        """Return the distinct cells read, in first-read order."""
        return list(dict.fromkeys(e.cell for e in self.entries))

    def __iter__(self) -> Iterator[AssignmentEntry]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)


class TrackingStore:
    """Wraps a store so that every read is appended to the current window.

    Allocations and writes pass straight through and record nothing.
    ``source_of`` maps a cell to the event that produced its current value.
    """

    def __init__(
        self,
        inner: VarStore,
        source_of: Callable[[CellId], int | None] | None = None,
    ) -> None:
        self.inner = inner
        self.source_of = source_of
        self._current: list[AssignmentEntry] = []

    def alloc(self, value: Any) -> CellId:
        return self.inner.alloc(value)

    def read(self, cell: CellId) -> Any:
        """Read ``cell`` from the inner store and record the read.

        :raises UnknownCellError: As the inner store.
        """
        value = self.inner.read(cell)
        source = self.source_of(cell) if self.source_of is not None else None
        self._current.append(AssignmentEntry(cell, value, type(value), source))
        return value

    def peek(self, cell: CellId) -> Any:
        """Read ``cell`` without recording it."""
        return self.inner.peek(cell)

    def write(self, cell: CellId, value: Any) -> None:
        self.inner.write(cell, value)

    def current_assignments(self) -> AssignmentContainer:
        """Return a snapshot of the reads recorded so far."""
        return AssignmentContainer(tuple(self._current))

    def reset_assignments(self) -> AssignmentContainer:
        """Return the reads recorded so far and start an empty window."""
        window = self.current_assignments()
        self._current.clear()
        return window

    def extend_assignments(self, entries: Iterable[AssignmentEntry]) -> None:
        """Put previously recorded reads back into the current window."""
        self._current.extend(entries)
