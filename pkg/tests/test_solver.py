"""
Tests for unit propagation, the clause learning solver and decision replay.
"""

import itertools
import random

import pytest

from reason_cells import solver
from reason_cells.depgraph import CutStrategy, build_graph
from reason_cells.dimacs import CnfFormula
from reason_cells.solver import (
    SearchState,
    SolverOptions,
    SolverStatus,
    replay,
    solve,
    unit_propagate,
)

from .bruteforce.truth_table import is_satisfiable, random_3cnf, satisfies
from .test_depgraph import assert_valid_dot


def formula(num_vars, *clauses):
    return CnfFormula(num_vars, tuple(tuple(c) for c in clauses))


def assert_reason_windows(state, clauses):
    """Every forced value's reason is exactly its clause's other literals."""
    session = state.session
    for event in session.events:
        if event.decision or event.value.is_bottom or event.value.is_top:
            continue
        var = state.variables[event.cell]
        forced = var if event.value.value else -var
        reason = session.reason_of(event)
        assert all(not entry.observed.is_bottom for entry in reason)
        assert any(
            forced in clause
            and set(reason.cells())
            == {state.cells[abs(lit)] for lit in clause if lit != forced}
            for clause in clauses
        )


class TestUnitPropagate:
    """Test unit_propagate()."""

    def test_unit_clause(self):
        state = SearchState(1)
        outcome = unit_propagate(state.session, [(1,)], state.cells)
        assert outcome.conflict is None
        assert outcome.propagations == 1
        assert state.value(1) is True

    def test_chain_ends_in_conflict(self):
        state = SearchState(2)
        clauses = [(1,), (-1, 2), (-2,)]
        outcome = unit_propagate(state.session, clauses, state.cells)
        assert outcome.conflict == state.cells[2]
        graph = build_graph(state.session, outcome.conflict)
        assigned = {graph.nodes[i].cell for i in graph.closure(graph.conflict)}
        assert assigned == {state.cells[1], state.cells[2]}

    def test_reason_of_forced_value(self):
        state = SearchState(3)
        state.decide(1, False)
        unit_propagate(state.session, [(1, -2, 3), (-3,)], state.cells)
        event = state.session.events_of(state.cells[2])[-1]
        assert not event.decision
        assert set(state.session.reason_of(event).cells()) == {
            state.cells[1],
            state.cells[3],
        }

    def test_nothing_to_do(self):
        state = SearchState(3)
        outcome = unit_propagate(state.session, [(1, 2), (2, 3)], state.cells)
        assert outcome == (None, 0)
        assert len(state.session.events) == 3

    def test_duplicate_literals_count_once(self):
        state = SearchState(1)
        unit_propagate(state.session, [(-1, -1)], state.cells)
        assert state.value(1) is False

    def test_empty_clause(self):
        state = SearchState(1)
        with pytest.raises(ValueError, match="empty clause"):
            unit_propagate(state.session, [()], state.cells)

    def test_fixpoint_is_propagation_closed(self):
        rng = random.Random(3)
        for _ in range(100):
            cnf = random_3cnf(rng, rng.randint(4, 10), rng.uniform(2.0, 5.0))
            state = SearchState(cnf.num_vars)
            outcome = unit_propagate(state.session, cnf.clauses, state.cells)
            for var in range(1, cnf.num_vars + 1):
                if outcome.conflict is not None:
                    break
                if state.value(var) is None and rng.random() < 0.5:
                    state.decide(var, rng.random() < 0.5)
                    outcome = unit_propagate(state.session, cnf.clauses, state.cells)
            assert_reason_windows(state, cnf.clauses)
            if outcome.conflict is None:
                for clause in cnf.clauses:
                    values = [state.value(abs(lit)) for lit in clause]
                    satisfied = any(
                        v is not None and v == (lit > 0)
                        for v, lit in zip(values, clause)
                    )
                    assert satisfied or values.count(None) != 1


class TestSolve:
    """Test solve()."""

    def test_contradiction(self):
        assert solve(formula(1, [1], [-1])).status == SolverStatus.UNSAT

    def test_single_clause(self):
        cnf = formula(2, [1, 2])
        result = solve(cnf)
        assert result.status == SolverStatus.SAT
        assert satisfies(cnf, result.model)

    def test_no_clauses(self):
        result = solve(formula(0))
        assert result.status == SolverStatus.SAT
        assert result.model == {}

    def test_empty_clause(self):
        assert solve(formula(2, [1], [])).status == SolverStatus.UNSAT

    @pytest.mark.parametrize("strategy", list(CutStrategy))
    @pytest.mark.parametrize("filename", ["unsat2.cnf", "pigeonhole-3-2.cnf"])
    def test_unsatisfiable_files(self, load_cnf_file, filename, strategy):
        result = solve(load_cnf_file(filename), SolverOptions(learn=strategy))
        assert result.status == SolverStatus.UNSAT
        assert result.model is None
        assert not result.incomplete

    def test_learning_flips_first_decision(self, load_cnf_file):
        result = solve(load_cnf_file("needs-learning.cnf"))
        assert result.status == SolverStatus.SAT
        assert result.model == {1: False, 2: True, 3: False, 4: True}
        assert result.learned == [(-1,), (-3,)]
        assert result.stats.conflicts == 2
        assert result.stats.decisions == 3

    def test_conflict_records(self, load_cnf_file):
        result = solve(load_cnf_file("unsat2.cnf"))
        record = result.conflicts[0]
        assert record.decisions == ((1, True),)
        assert record.learned == (-1,)
        assert record.backjump == 0
        assert_valid_dot(record.dot())
        assert "x1 = true @L1" in record.dot()

    def test_propagation_only(self, load_cnf_file):
        result = solve(load_cnf_file("sat-chain.cnf"))
        assert result.model == {1: True, 2: True, 3: True, 4: True}
        assert result.stats.conflicts == 0
        assert result.stats.propagations == 3

    def test_max_conflicts(self, load_cnf_file):
        options = SolverOptions(max_conflicts=1)
        result = solve(load_cnf_file("pigeonhole-3-2.cnf"), options)
        assert result.status == SolverStatus.UNKNOWN
        assert result.incomplete
        assert result.stats.conflicts == 1
        assert len(result.learned) == 1

    def test_max_seconds(self, load_cnf_file, monkeypatch):
        ticks = itertools.count(0.0, 10.0)
        monkeypatch.setattr(solver.time, "monotonic", lambda: next(ticks))
        result = solve(load_cnf_file("sat-chain.cnf"), SolverOptions(max_seconds=5))
        assert result.status == SolverStatus.UNKNOWN
        assert result.stats.decisions == 0

    def test_log_messages(self, load_cnf_file, caplog):
        with caplog.at_level("DEBUG", logger="reason_cells"):
            solve(load_cnf_file("unsat2.cnf"))
        messages = [record.getMessage() for record in caplog.records]
        assert "Decide x1 = True at level 1" in messages
        assert messages[-1] == "UNSATISFIABLE after 1 decisions, 2 conflicts"

    def test_every_pair_of_units_on_three_variables(self):
        literals = [1, -1, 2, -2, 3, -3]
        for a, b in itertools.product(literals, repeat=2):
            cnf = formula(3, [a], [b], [-a, -b, 3])
            result = solve(cnf)
            expected = is_satisfiable(cnf)
            assert (result.status == SolverStatus.SAT) == expected
            if expected:
                assert satisfies(cnf, result.model)


class TestReplay:
    """Test replay()."""

    def test_conflict_after_last_decision(self, load_cnf_file):
        cnf = load_cnf_file("needs-learning.cnf")
        outcome = replay(cnf, [(1, True)])
        assert outcome.stopped_at == 1
        assert outcome.conflict

    def test_learned_clause_pre_empts_decision(self, load_cnf_file):
        cnf = load_cnf_file("needs-learning.cnf")
        outcome = replay(cnf, [(1, True)], learned=[(-1,)])
        assert outcome.stopped_at == 0
        assert not outcome.conflict

    def test_level_zero_conflict(self, load_cnf_file):
        cnf = load_cnf_file("unsat2.cnf")
        assert replay(cnf, [(2, True)], learned=[(-1,)]).stopped_at == 0

    def test_clean_replay(self, load_cnf_file):
        cnf = load_cnf_file("sat-chain.cnf")
        assert replay(cnf, [(4, False)]).stopped_at is None
