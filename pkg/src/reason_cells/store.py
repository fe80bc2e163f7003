"""In-memory cell store: allocate, read and write typed cells."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, NamedTuple, Protocol

# Each store gets its own owner token so handles cannot cross stores silently
_STORE_TOKENS = itertools.count()


class StoreError(ValueError):
    """Base class for cell store usage errors."""


class UnknownCellError(StoreError):
    """A CellId was not allocated by the store it was used with."""


class CellTypeError(StoreError):
    """A value does not match the type tag of its cell, or is mutable."""


@dataclass(frozen=True, order=True)
class CellId:
    """Handle of a cell, scoped to the store that allocated it."""

    index: int
    owner: int

    def __str__(self) -> str:
        return f"c{self.index}"


class StoredValue(NamedTuple):
    """A value snapshot together with its runtime type tag."""

    type_tag: type
    payload: Any


class VarStore(Protocol):
    """Interface shared by every store: the raw store and all its wrappers."""

    def alloc(self, value: Any) -> CellId: ...

    def read(self, cell: CellId) -> Any: ...

    def write(self, cell: CellId, value: Any) -> None: ...

    def peek(self, cell: CellId) -> Any: ...


def _snapshot(value: Any) -> StoredValue:
    """Wrap a value, rejecting payloads that could change after being stored.

    :param value: The value to store.
    :returns: The tagged snapshot.
    :raises CellTypeError: If the value is not hashable (and so not immutable).
    """
    try:
        hash(value)
    except TypeError as e:
        raise CellTypeError(
            f"Cell values must be immutable, got {type(value).__name__}: {value!r}"
        ) from e
    return StoredValue(type(value), value)


class Store:
    """A map from dense integer ids to immutable value snapshots."""

    def __init__(self) -> None:
        self.token = next(_STORE_TOKENS)
        self._cells: list[StoredValue] = []

    def __len__(self) -> int:
        return len(self._cells)

    def _check(self, cell: CellId) -> None:
        if cell.owner != self.token or not 0 <= cell.index < len(self._cells):
            raise UnknownCellError(f"Cell {cell} was not allocated in this store.")

    def alloc(self, value: Any) -> CellId:
        """Allocate a fresh cell holding ``value``.

        :param value: Initial (immutable) value; its type becomes the cell's tag.
        :returns: The new cell id, ``index`` equal to the number of earlier allocations.
        :raises CellTypeError: If the value is mutable.
        """
        snapshot = _snapshot(value)
        cell = CellId(len(self._cells), self.token)
        self._cells.append(snapshot)
        return cell

    def stored(self, cell: CellId) -> StoredValue:
        """Return the tagged snapshot held by ``cell``.

        :raises UnknownCellError: If the cell belongs to another store.
        """
        self._check(cell)
        return self._cells[cell.index]

    def read(self, cell: CellId) -> Any:
        """Return the value most recently written to ``cell``.

        :raises UnknownCellError: If the cell belongs to another store.
        """
        return self.stored(cell).payload

    # Nothing is recorded by the raw store, so inspecting equals reading
    peek = read

    def write(self, cell: CellId, value: Any) -> None:
        """Replace the value of ``cell``.

        :param cell: A cell allocated by this store.
        :param value: New value, of exactly the cell's type.
        :raises UnknownCellError: If the cell belongs to another store.
        :raises CellTypeError: If the value's type differs from the cell's tag.
        """
        current = self.stored(cell)
        snapshot = _snapshot(value)
        if snapshot.type_tag is not current.type_tag:
            raise CellTypeError(
                f"Cell {cell} holds {current.type_tag.__name__}, "
                f"cannot write {snapshot.type_tag.__name__}."
            )
        self._cells[cell.index] = snapshot
