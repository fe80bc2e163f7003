"""A clause learning SAT solver built only on recording sessions.

Every variable is a flat Boolean lattice cell in a
:class:`~reason_cells.reasons.ClauseLearningSession`. Unit propagation reads
the falsified literals of a clause and then merges the forced value into the
remaining cell, so each forced assignment carries exactly its clause's other
literals as reason. Conflicts are analysed on the dependency graph built from
those reasons.

Cells only ever gain information, so backjumping starts a fresh session and
replays the surviving decision prefix.
"""

from __future__ import annotations

import logging
import time
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple

from .depgraph import (
    CutStrategy,
    DepGraph,
    LearnedClause,
    UnsatisfiableError,
    analyze_conflict,
    build_graph,
    export_dot,
)
from .dimacs import CnfFormula
from .lattice import Flat, MergeOutcome, merge_write
from .reasons import ClauseLearningSession
from .store import CellId

logger = logging.getLogger(__name__)

Clause = tuple[int, ...]
Decision = tuple[int, bool]
LearnStrategy = CutStrategy


class SolverStatus(Enum):
    SAT = "SATISFIABLE"
    UNSAT = "UNSATISFIABLE"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class SolverOptions:
    """Search settings; ``None`` limits are unbounded."""

    learn: LearnStrategy = LearnStrategy.DECISION
    max_conflicts: int | None = None
    max_seconds: float | None = None


@dataclass
class SolverStats:
    decisions: int = 0
    propagations: int = 0
    conflicts: int = 0


@dataclass
class ConflictRecord:
    """One analysed conflict."""

    # Decisions in effect when the conflict happened, in level order
    decisions: tuple[Decision, ...]
    learned: Clause
    backjump: int
    graph: DepGraph
    names: dict[CellId, str]

    def dot(self) -> str:
        return export_dot(self.graph, self.names.__getitem__)


@dataclass
class SolverResult:
    status: SolverStatus
    model: dict[int, bool] | None = None
    # Learned clauses as DIMACS literals, in learning order
    learned: list[Clause] = field(default_factory=list)
    stats: SolverStats = field(default_factory=SolverStats)
    conflicts: list[ConflictRecord] = field(default_factory=list)

    @property
    def incomplete(self) -> bool:
        """True when a resource limit stopped the search."""
        return self.status == SolverStatus.UNKNOWN


class PropagationResult(NamedTuple):
    conflict: CellId | None
    propagations: int


class SearchState:
    """A fresh session with one unknown flat cell per variable."""

    def __init__(self, num_vars: int) -> None:
        self.session = ClauseLearningSession()
        self.cells = {
            v: self.session.alloc(Flat.unknown()) for v in range(1, num_vars + 1)
        }
        self.variables = {cell: v for v, cell in self.cells.items()}

    def value(self, var: int) -> bool | None:
        flat: Flat = self.session.peek(self.cells[var])
        return None if flat.is_bottom else bool(flat.value)

    def first_unassigned(self) -> int | None:
        for var in self.cells:
            if self.value(var) is None:
                return var
        return None

    def decide(self, var: int, value: bool) -> None:
        self.session.reset_assignments()
        self.session.mark_decision()
        merge_write(self.session, self.cells[var], Flat.of(value))

    def names(self) -> dict[CellId, str]:
        return {cell: f"x{v}" for cell, v in self.cells.items()}

    def to_clause(self, learned: LearnedClause) -> Clause:
        """Translate a learned clause over cells into DIMACS literals."""
        literals = []
        for literal in learned:
            var = self.variables[literal.cell]
            literals.append(-var if literal.value.value else var)
        return tuple(sorted(literals, key=abs))


def unit_propagate(
    session: ClauseLearningSession,
    clauses: Sequence[Clause],
    cells: Mapping[int, CellId],
) -> PropagationResult:
    """Assign forced literals until a fixpoint or a conflict.

    Before each forced write the read window is reset and only the clause's
    falsified literals are read, so they form the write's reason. A clause
    whose literals are all false re-asserts its most recently assigned
    literal, which merges to conflict with the cell's current value as part
    of the reason.

    :param session: Session holding one flat Boolean cell per variable.
    :param clauses: Clauses as DIMACS literals.
    :param cells: Cell of every variable.
    :returns: The conflicting cell (or None at a fixpoint) and the number of
        forced assignments made.
    :raises UnsatisfiableError: If a clause is empty.
    """
    values: dict[int, bool | None] = {}
    for var, cell in cells.items():
        flat: Flat = session.peek(cell)
        if flat.is_top:
            return PropagationResult(cell, 0)
        values[var] = None if flat.is_bottom else bool(flat.value)

    propagations = 0
    changed = True
    while changed:
        changed = False
        for clause in clauses:
            if not clause:
                raise UnsatisfiableError("The formula contains an empty clause.")
            satisfied = False
            unassigned: dict[int, None] = {}
            for lit in clause:
                value = values[abs(lit)]
                if value is None:
                    unassigned[lit] = None
                elif value == (lit > 0):
                    satisfied = True
                    break
            if satisfied or len(unassigned) > 1:
                continue

            session.reset_assignments()
            if unassigned:
                forced = next(iter(unassigned))
                for lit in clause:
                    if lit != forced:
                        session.read(cells[abs(lit)])
                merge_write(session, cells[abs(forced)], Flat.of(forced > 0))
                values[abs(forced)] = forced > 0
                propagations += 1
                changed = True
                continue

            latest = max(
                clause, key=lambda lit: session.events_of(cells[abs(lit)])[-1].index
            )
            for lit in clause:
                if abs(lit) != abs(latest):
                    session.read(cells[abs(lit)])
            cell = cells[abs(latest)]
            outcome = merge_write(session, cell, Flat.of(latest > 0))
            assert outcome == MergeOutcome.CONFLICT
            logger.debug("Conflict on x%d from clause %s", abs(latest), clause)
            return PropagationResult(cell, propagations)
    return PropagationResult(None, propagations)


def _normalise(clauses: Sequence[Sequence[int]]) -> list[Clause]:
    return [tuple(dict.fromkeys(clause)) for clause in clauses]


class _Search:
    def __init__(self, formula: CnfFormula, options: SolverOptions) -> None:
        self.formula = formula
        self.options = options
        self.clauses = _normalise(formula.clauses)
        self.result = SolverResult(SolverStatus.UNKNOWN)
        self.deadline = (
            None
            if options.max_seconds is None
            else time.monotonic() + options.max_seconds
        )

    def _finish(
        self, status: SolverStatus, model: dict[int, bool] | None = None
    ) -> SolverResult:
        self.result.status = status
        self.result.model = model
        logger.info(
            "%s after %d decisions, %d conflicts",
            status.value,
            self.result.stats.decisions,
            self.result.stats.conflicts,
        )
        return self.result

    def _out_of_budget(self) -> bool:
        limit = self.options.max_conflicts
        if limit is not None and self.result.stats.conflicts >= limit:
            return True
        return self.deadline is not None and time.monotonic() > self.deadline

    def _learn(
        self, state: SearchState, conflict: CellId, applied: list[Decision]
    ) -> int:
        graph = build_graph(state.session, conflict)
        learned, backjump = analyze_conflict(graph, strategy=self.options.learn)
        clause = state.to_clause(learned)
        self.clauses.append(clause)
        self.result.learned.append(clause)
        self.result.conflicts.append(
            ConflictRecord(tuple(applied), clause, backjump, graph, state.names())
        )
        logger.debug("Learned %s, backjump to level %d", clause, backjump)
        return backjump

    def run(self) -> SolverResult:
        if any(not clause for clause in self.clauses):
            return self._finish(SolverStatus.UNSAT)

        stats = self.result.stats
        state = SearchState(self.formula.num_vars)
        applied: list[Decision] = []
        pending: list[Decision] = []
        while True:
            outcome = unit_propagate(state.session, self.clauses, state.cells)
            stats.propagations += outcome.propagations
            if outcome.conflict is not None:
                stats.conflicts += 1
                if state.session.level == 0:
                    return self._finish(SolverStatus.UNSAT)
                try:
                    backjump = self._learn(state, outcome.conflict, applied)
                except UnsatisfiableError:
                    return self._finish(SolverStatus.UNSAT)
                if self._out_of_budget():
                    return self._finish(SolverStatus.UNKNOWN)
                pending = applied[:backjump]
                applied = []
                state = SearchState(self.formula.num_vars)
                continue
            if self._out_of_budget():
                return self._finish(SolverStatus.UNKNOWN)

            if pending:
                var, value = pending.pop(0)
                if state.value(var) is not None:
                    continue
            else:
                next_var = state.first_unassigned()
                if next_var is None:
                    model = {v: bool(state.value(v)) for v in state.cells}
                    return self._finish(SolverStatus.SAT, model)
                var, value = next_var, True
                stats.decisions += 1
            state.decide(var, value)
            applied.append((var, value))
            logger.debug("Decide x%d = %s at level %d", var, value, len(applied))


def solve(formula: CnfFormula, options: SolverOptions | None = None) -> SolverResult:
    """Decide satisfiability of ``formula``.

    Decisions pick the lowest unassigned variable and try true first.

    :param formula: The CNF formula.
    :param options: Cut strategy and resource limits.
    :returns: The result; ``UNKNOWN`` when a limit stopped the search.
    """
    return _Search(formula, options or SolverOptions()).run()


@dataclass(frozen=True)
class ReplayOutcome:
    """Where a replayed decision sequence stopped.

    ``stopped_at`` is the index of the decision that could not be made
    because propagation had already assigned its variable or had hit a
    conflict; ``len(decisions)`` means a conflict after the last decision,
    and ``None`` means the whole sequence replayed without incident.
    """

    stopped_at: int | None
    conflict: bool


def replay(
    formula: CnfFormula,
    decisions: Sequence[Decision],
    learned: Sequence[Sequence[int]] = (),
) -> ReplayOutcome:
    """Re-apply a decision sequence with propagation after every step.

    :param formula: The original formula.
    :param decisions: Decisions to apply in order.
    :param learned: Extra clauses to propagate with.
    :returns: Where propagation pre-empted or contradicted the sequence.
    """
    clauses = _normalise([*formula.clauses, *learned])
    state = SearchState(formula.num_vars)
    for step, (var, value) in enumerate(decisions):
        if unit_propagate(state.session, clauses, state.cells).conflict is not None:
            return ReplayOutcome(step, True)
        if state.value(var) is not None:
            return ReplayOutcome(step, False)
        state.decide(var, value)
    if unit_propagate(state.session, clauses, state.cells).conflict is not None:
        return ReplayOutcome(len(decisions), True)
    return ReplayOutcome(None, False)
