"""Dependency graphs from recorded reasons, and conflict analysis on them."""

from __future__ import annotations

import logging
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from .reasons import AssignmentEvent, ClauseLearningSession
from .store import CellId
from .tracking import AssignmentEntry
from .utils import Naming, cell_name, dot_escape, render_value

logger = logging.getLogger(__name__)


class MalformedSessionError(ValueError):
    """A reason refers to a value no recorded assignment produced."""


class UnsatisfiableError(ValueError):
    """The conflict does not depend on any decision."""


class CutStrategy(Enum):
    """Which nodes of the graph make up a learned clause."""

    DECISION = "decision"
    UIP = "uip"


class Polarity(Enum):
    ASSERTED = "asserted"
    FORBIDDEN = "forbidden"


@dataclass(frozen=True)
class Literal:
    """A cell/value pair, asserted or forbidden."""

    cell: CellId
    value: Any
    polarity: Polarity = Polarity.FORBIDDEN

    def render(self, naming: Naming = cell_name) -> str:
        op = "!=" if self.polarity == Polarity.FORBIDDEN else "="
        return f"{naming(self.cell)} {op} {render_value(self.value, naming)}"


@dataclass(frozen=True)
class LearnedClause:
    """Not all of these assignments may hold at the same time."""

    literals: frozenset[Literal]

    def __iter__(self) -> Iterator[Literal]:
        return iter(sorted(self.literals, key=lambda lit: lit.cell))

    def __len__(self) -> int:
        return len(self.literals)

    def render(self, naming: Naming = cell_name) -> str:
        return " v ".join(f"({lit.render(naming)})" for lit in self)


@dataclass
class DepGraph:
    """Assignment events linked by "this read caused that assignment".

    Nodes are keyed by event index; an edge ``(a, b)`` means event ``a``
    produced a value that was read before event ``b``.
    """

    nodes: dict[int, AssignmentEvent] = field(default_factory=dict)
    edges: set[tuple[int, int]] = field(default_factory=set)
    conflict: int | None = None

    def antecedents(self, index: int) -> list[int]:
        return sorted(src for src, dst in self.edges if dst == index)

    def closure(self, index: int) -> set[int]:
        """Return ``index`` and every event it transitively depends on."""
        seen = {index}
        stack = [index]
        while stack:
            for source in self.antecedents(stack.pop()):
                if source not in seen:
                    seen.add(source)
                    stack.append(source)
        return seen

    def decisions(self) -> list[AssignmentEvent]:
        return [self.nodes[i] for i in sorted(self.nodes) if self.nodes[i].decision]


def _producer(
    session: ClauseLearningSession, entry: AssignmentEntry, before: int
) -> AssignmentEvent:
    """Find the event that assigned the value ``entry`` observed.

    Reads stamped with their source event resolve to it; unstamped reads fall
    back to the latest earlier event of the cell with an equal value.
    """
    candidates: Iterable[AssignmentEvent]
    if entry.source is None:
        candidates = reversed(session.events_of(entry.cell))
    elif entry.source < len(session.events):
        candidates = [session.events[entry.source]]
    else:
        candidates = []
    for event in candidates:
        if (
            event.cell == entry.cell
            and event.index < before
            and event.value == entry.observed
        ):
            return event
    raise MalformedSessionError(
        f"No recorded assignment of {entry.cell} to {entry.observed!r} "
        f"precedes event {before}."
    )


def build_graph(session: ClauseLearningSession, conflict_cell: CellId) -> DepGraph:
    """Build the reason closure of the latest assignment of ``conflict_cell``.

    Decision events are leaves; every other event links to the events that
    produced each value in its reason.

    :param session: The session that recorded the assignments.
    :param conflict_cell: The cell whose latest assignment is the root.
    :returns: The dependency graph, with ``conflict`` set to the root event.
    :raises MalformedSessionError: If the cell has no recorded assignment or a
        reason entry cannot be traced to an earlier assignment.
    """
    events = session.events_of(conflict_cell)
    if not events:
        raise MalformedSessionError(f"Cell {conflict_cell} has no recorded assignment.")
    root = events[-1]
    graph = DepGraph(conflict=root.index)
    stack = [root]
    while stack:
        event = stack.pop()
        if event.index in graph.nodes:
            continue
        graph.nodes[event.index] = event
        if event.decision:
            continue
        for entry in session.reason_of(event):
            source = _producer(session, entry, event.index)
            graph.edges.add((source.index, event.index))
            if source.index not in graph.nodes:
                stack.append(source)
    return graph


def _root(graph: DepGraph, conflict_event: int | None) -> AssignmentEvent:
    index = graph.conflict if conflict_event is None else conflict_event
    if index is None or index not in graph.nodes:
        raise MalformedSessionError(f"Conflict event {index} is not in the graph.")
    return graph.nodes[index]


def _first_uip_cut(graph: DepGraph, root: AssignmentEvent) -> list[AssignmentEvent]:
    current = set(graph.antecedents(root.index)) or {root.index}
    conflict_level = max(graph.nodes[i].level for i in current)
    while True:
        at_level = [i for i in current if graph.nodes[i].level == conflict_level]
        if len(at_level) <= 1:
            break
        # Events are numbered in assignment order, so the latest is resolved first
        latest = max(at_level)
        if graph.nodes[latest].decision:
            break
        current.remove(latest)
        current.update(graph.antecedents(latest))
    return [graph.nodes[i] for i in sorted(current)]


def analyze_conflict(
    graph: DepGraph,
    conflict_event: int | None = None,
    strategy: CutStrategy = CutStrategy.DECISION,
) -> tuple[LearnedClause, int]:
    """Derive a learned clause and the level to jump back to.

    :param graph: Graph from :func:`build_graph`.
    :param conflict_event: Root event index, defaults to ``graph.conflict``.
    :param strategy: Decision cut (negate contributing decisions) or first UIP.
    :returns: The clause and the second highest decision level among its
        literals (0 for a single literal).
    :raises UnsatisfiableError: If the cut is empty (conflict at level 0).
    """
    root = _root(graph, conflict_event)
    if strategy == CutStrategy.DECISION:
        cut = [graph.nodes[i] for i in sorted(graph.closure(root.index))]
        cut = [e for e in cut if e.decision]
    else:
        cut = _first_uip_cut(graph, root)
    # Level 0 assignments hold in every branch
    cut = [e for e in cut if e.level > 0]
    if not cut:
        raise UnsatisfiableError("Conflict does not depend on any decision.")

    clause = LearnedClause(frozenset(Literal(e.cell, e.value) for e in cut))
    levels = sorted({e.level for e in cut}, reverse=True)
    backjump = levels[1] if len(levels) > 1 else 0
    logger.debug(
        "Learned %s (%s cut), backjump to level %d",
        clause.render(),
        strategy.value,
        backjump,
    )
    return clause, backjump


def earliest_decision(graph: DepGraph, conflict_event: int | None = None) -> int:
    """Return the lowest decision level the conflict depends on, 0 if none."""
    root = _root(graph, conflict_event)
    levels = [
        graph.nodes[i].level
        for i in graph.closure(root.index)
        if graph.nodes[i].decision
    ]
    return min(levels, default=0)


def export_dot(graph: DepGraph, naming: Naming = cell_name) -> str:
    """Render the graph in Graphviz DOT.

    Nodes are labelled ``p<i> = <value> @L<level>``; decisions are boxes and
    the conflict node is red.

    :param graph: The graph to render.
    :param naming: Function naming cells in the labels.
    :returns: DOT text with LF line endings.
    """
    if not graph.nodes:
        return "digraph { }\n"
    lines = ["digraph {"]
    for index in sorted(graph.nodes):
        event = graph.nodes[index]
        label = dot_escape(
            f"{naming(event.cell)} = {render_value(event.value, naming)} "
            f"@L{event.level}"
        )
        attrs = [f'label="{label}"']
        if event.decision:
            attrs.append("shape=box")
        if index == graph.conflict:
            attrs.append("color=red")
        lines.append(f"  e{index} [{', '.join(attrs)}];")
    for source, target in sorted(graph.edges):
        lines.append(f"  e{source} -> e{target};")
    lines.append("}")
    return "\n".join(lines) + "\n"
