"""
Comparison tests between the clause learning solver and a truth-table check.

Every formula has at most 12 variables, so the reference can enumerate all
assignments. Learned clauses are checked for soundness, and replaying a
conflict's decisions with its learned clause must stop no later than the
original conflict did.
"""

from __future__ import annotations

import random

import pytest

from reason_cells import CnfFormula, CutStrategy, SolverOptions, SolverStatus, solve
from reason_cells.depgraph import analyze_conflict, earliest_decision
from reason_cells.solver import SolverResult, replay

from .bruteforce.truth_table import implies, is_satisfiable, random_corpus, satisfies

CORPUS_SIZE = 500
CORPUS = random_corpus(seed=2024, count=CORPUS_SIZE)


@pytest.fixture(scope="module")
def solved() -> list[tuple[CnfFormula, SolverResult]]:
    return [(formula, solve(formula)) for formula in CORPUS]


@pytest.fixture(scope="module")
def solved_uip() -> list[tuple[CnfFormula, SolverResult]]:
    options = SolverOptions(learn=CutStrategy.UIP)
    return [(formula, solve(formula, options)) for formula in CORPUS[:200]]


def test_corpus_shape() -> None:
    assert len(CORPUS) >= 500
    for formula in CORPUS:
        assert 4 <= formula.num_vars <= 12
        assert 2 * formula.num_vars <= len(formula.clauses) <= 6 * formula.num_vars
    statuses = {is_satisfiable(formula) for formula in CORPUS}
    assert statuses == {True, False}


class TestStatusComparison:
    """Compare solve() with truth-table satisfiability."""

    def test_decision_cut(self, solved) -> None:
        for formula, result in solved:
            sat = is_satisfiable(formula)
            expected = SolverStatus.SAT if sat else SolverStatus.UNSAT
            assert result.status == expected, formula
            if result.model is not None:
                assert satisfies(formula, result.model)

    def test_first_uip_cut(self, solved_uip) -> None:
        for formula, result in solved_uip:
            assert (result.status == SolverStatus.SAT) == is_satisfiable(formula)
            if result.model is not None:
                assert satisfies(formula, result.model)


class TestLearnedClauses:
    """Check learned clauses against their formulas."""

    @pytest.mark.parametrize("results", ["solved", "solved_uip"])
    def test_every_learned_clause_is_implied(self, results, request) -> None:
        for formula, result in request.getfixturevalue(results):
            for clause in result.learned:
                assert implies(formula, clause), (formula, clause)

    def test_learned_clauses_are_records(self, solved) -> None:
        for _, result in solved:
            assert [record.learned for record in result.conflicts] == result.learned

    @pytest.mark.parametrize("results", ["solved", "solved_uip"])
    def test_no_recurrence(self, results, request) -> None:
        samples = [
            (formula, result, i)
            for formula, result in request.getfixturevalue(results)
            for i in range(len(result.conflicts))
        ]
        assert len(samples) >= 100
        for formula, result, i in random.Random(5).sample(samples, 100):
            decisions = result.conflicts[i].decisions
            without = replay(formula, decisions, result.learned[:i])
            assert without.stopped_at == len(decisions)
            assert without.conflict
            with_clause = replay(formula, decisions, result.learned[: i + 1])
            assert with_clause.stopped_at is not None
            assert with_clause.stopped_at <= len(decisions)
            if results == "solved":
                assert with_clause.stopped_at < len(decisions)


def cut_levels(graph, clause):
    return {
        event.level
        for event in graph.nodes.values()
        for literal in clause
        if (event.cell, event.value) == (literal.cell, literal.value)
    }


class TestEarliestDecision:
    """Compare earliest_decision() with the levels of learned cuts."""

    def test_matches_lowest_level_of_the_decision_cut(self, solved) -> None:
        checked = 0
        for _, result in solved:
            for record in result.conflicts:
                clause, _ = analyze_conflict(record.graph)
                assert earliest_decision(record.graph) == min(
                    cut_levels(record.graph, clause)
                )
                checked += 1
        assert checked >= 100

    def test_bounds_the_first_uip_cut(self, solved_uip) -> None:
        for _, result in solved_uip:
            for record in result.conflicts:
                clause, _ = analyze_conflict(record.graph, strategy=CutStrategy.UIP)
                levels = cut_levels(record.graph, clause)
                assert earliest_decision(record.graph) <= min(levels)
                assert max(levels) == max(
                    event.level for event in record.graph.nodes.values()
                )
