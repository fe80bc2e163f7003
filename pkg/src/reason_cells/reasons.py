"""Reason recording: every assignment stores the reads that led to it.

A :class:`ProductStore` gives each cell a main slot and an auxiliary slot.
A :class:`ClauseLearningSession` tracks reads over the main slots and, on
every allocation or write, appends the reads recorded so far to the cell's
auxiliary :class:`ReasonLog`.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from typing import Any

from .store import CellId, CellTypeError, Store, StoreError, VarStore
from .tracking import AssignmentContainer, AssignmentEntry, TrackingStore
from .utils import Naming, cell_name, render_value

logger = logging.getLogger(__name__)

# Marks an omitted empty_aux, so that None stays usable as an aux value
_EMPTY_LOG = object()


@dataclass(frozen=True)
class ReasonLog:
    """The reasons of one cell, one per assignment event, oldest first."""

    reasons: tuple[AssignmentContainer, ...] = ()

    def append(self, reason: AssignmentContainer) -> ReasonLog:
        return ReasonLog((*self.reasons, reason))

    def __iter__(self) -> Iterator[AssignmentContainer]:
        return iter(self.reasons)

    def __len__(self) -> int:
        return len(self.reasons)

    def __getitem__(self, position: int) -> AssignmentContainer:
        return self.reasons[position]


@dataclass(frozen=True)
class TupleCell:
    """Content of a product cell: the main value and the auxiliary value."""

    main: Any
    aux: Any


class ProductStore:
    """Store whose cells carry a main slot and an independent auxiliary slot.

    The main channel (``alloc``/``read``/``write``) behaves like a plain
    store; the auxiliary channel is reached through ``aux_read``/``aux_write``.
    Writing one slot always preserves the other.
    """

    def __init__(
        self, inner: VarStore | None = None, empty_aux: Any = _EMPTY_LOG
    ) -> None:
        self.inner: VarStore = inner if inner is not None else Store()
        self.empty_aux = ReasonLog() if empty_aux is _EMPTY_LOG else empty_aux

    def _tuple(self, cell: CellId) -> TupleCell:
        content = self.inner.peek(cell)
        if not isinstance(content, TupleCell):
            raise StoreError(f"Cell {cell} is not a product cell.")
        return content

    def alloc(self, value: Any) -> CellId:
        """Allocate a cell with ``value`` as main and the empty auxiliary value."""
        return self.inner.alloc(TupleCell(value, self.empty_aux))

    def read(self, cell: CellId) -> Any:
        return self._tuple(cell).main

    peek = read

    def write(self, cell: CellId, value: Any) -> None:
        """Replace the main slot, keeping the auxiliary slot.

        :raises CellTypeError: If ``value`` has a different type than the main slot.
        """
        current = self._tuple(cell)
        if type(value) is not type(current.main):
            raise CellTypeError(
                f"Cell {cell} holds {type(current.main).__name__}, "
                f"cannot write {type(value).__name__}."
            )
        self.inner.write(cell, TupleCell(value, current.aux))

    def aux_read(self, cell: CellId) -> Any:
        return self._tuple(cell).aux

    def aux_write(self, cell: CellId, aux: Any) -> None:
        """Replace the auxiliary slot, keeping the main slot.

        :raises CellTypeError: If ``aux`` has a different type than the slot.
        """
        current = self._tuple(cell)
        if type(aux) is not type(current.aux):
            raise CellTypeError(
                f"Auxiliary slot of {cell} holds {type(current.aux).__name__}, "
                f"cannot write {type(aux).__name__}."
            )
        self.inner.write(cell, TupleCell(current.main, aux))


@dataclass(frozen=True)
class AssignmentEvent:
    """One allocation or write made through a session."""

    index: int
    cell: CellId
    value: Any
    level: int
    decision: bool
    # Position of this event's reason in the cell's ReasonLog
    reason_position: int


class ClauseLearningSession:
    """A store in which every assignment remembers why it happened.

    Reads are tracked cumulatively from the start of the session unless the
    caller delimits windows with :meth:`reset_assignments`.
    """

    def __init__(self, store: Store | None = None) -> None:
        self.product = ProductStore(store if store is not None else Store())
        self.tracking = TrackingStore(self.product, self._latest_event)
        self.events: list[AssignmentEvent] = []
        self._events_by_cell: dict[CellId, list[AssignmentEvent]] = {}
        self.level = 0
        self._decision_pending = False

    def _latest_event(self, cell: CellId) -> int | None:
        events = self._events_by_cell.get(cell)
        return events[-1].index if events else None

    def _put_assignments(self, cell: CellId, value: Any) -> None:
        log: ReasonLog = self.product.aux_read(cell)
        log = log.append(self.tracking.current_assignments())
        self.product.aux_write(cell, log)
        event = AssignmentEvent(
            index=len(self.events),
            cell=cell,
            value=value,
            level=self.level,
            decision=self._decision_pending,
            reason_position=len(log) - 1,
        )
        self._decision_pending = False
        self.events.append(event)
        self._events_by_cell.setdefault(cell, []).append(event)

    def alloc(self, value: Any) -> CellId:
        """Allocate a cell and record the current reads as its first reason."""
        cell = self.tracking.alloc(value)
        self._put_assignments(cell, value)
        return cell

    def read(self, cell: CellId) -> Any:
        return self.tracking.read(cell)

    def peek(self, cell: CellId) -> Any:
        return self.tracking.peek(cell)

    def write(self, cell: CellId, value: Any) -> None:
        """Record the current reads as a reason of ``cell``, then write it.

        :raises CellTypeError: If ``value`` does not match the cell's type.
        """
        # Written first so that a rejected write leaves no reason behind
        self.tracking.write(cell, value)
        self._put_assignments(cell, value)

    def get_reasons(self, cell: CellId) -> ReasonLog:
        """Return the reasons of ``cell``; this is not a tracked read."""
        log: ReasonLog = self.product.aux_read(cell)
        return log

    def current_assignments(self) -> AssignmentContainer:
        return self.tracking.current_assignments()

    def reset_assignments(self) -> AssignmentContainer:
        return self.tracking.reset_assignments()

    def extend_assignments(self, entries: Iterable[AssignmentEntry]) -> None:
        self.tracking.extend_assignments(entries)

    def mark_decision(self) -> int:
        """Open a new decision level; the next assignment is its decision.

        :returns: The new decision level.
        """
        self.level += 1
        self._decision_pending = True
        logger.debug("Opened decision level %d", self.level)
        return self.level

    def events_of(self, cell: CellId) -> list[AssignmentEvent]:
        """Return the assignment events of ``cell``, oldest first."""
        return list(self._events_by_cell.get(cell, ()))

    def reason_of(self, event: AssignmentEvent) -> AssignmentContainer:
        """Return the reason recorded for one assignment event."""
        return self.get_reasons(event.cell)[event.reason_position]


def render_reason(reason: AssignmentContainer, naming: Naming = cell_name) -> str:
    """Render one reason as ``(p3 = lcons false p2) ^ (p2 = lcons true p1)``."""
    return " ^ ".join(
        f"({naming(entry.cell)} = {render_value(entry.observed, naming)})"
        for entry in reason
    )


def render_reasons(
    log: Iterable[AssignmentContainer], naming: Naming = cell_name
) -> str:
    """Render every reason of a log, separated by `` v ``.

    :param log: A :class:`ReasonLog` (or any iterable of reasons).
    :param naming: Function naming the cells in the output.
    :returns: The rendered text; empty for an empty reason.
    """
    return " v ".join(render_reason(reason, naming) for reason in log)
