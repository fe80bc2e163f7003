"""
Tests for dependency graphs and conflict analysis.
"""

import re

import pytest

from reason_cells.depgraph import (
    CutStrategy,
    DepGraph,
    MalformedSessionError,
    UnsatisfiableError,
    analyze_conflict,
    build_graph,
    earliest_decision,
    export_dot,
)
from reason_cells.lattice import Flat, merge_write
from reason_cells.reasons import ClauseLearningSession
from reason_cells.solver import SearchState, unit_propagate
from reason_cells.store import CellId

DOT_NODE = re.compile(
    r'^  e\d+ \[label="(?:[^"\\]|\\.)*"(, shape=box)?(, color=red)?\];$'
)
DOT_EDGE = re.compile(r"^  e\d+ -> e\d+;$")


def assert_valid_dot(text):
    lines = text.splitlines()
    assert lines[0] == "digraph {"
    assert lines[-1] == "}"
    for line in lines[1:-1]:
        assert DOT_NODE.match(line) or DOT_EDGE.match(line), line


def decide(session, cell, value):
    session.reset_assignments()
    session.mark_decision()
    merge_write(session, cell, Flat.of(value))


def derive(session, cell, value, *sources):
    session.reset_assignments()
    for source in sources:
        session.read(source)
    merge_write(session, cell, Flat.of(value))


@pytest.fixture
def two_level_conflict():
    """x decided at level 1 implies y; z decided at level 2 contradicts y."""
    session = ClauseLearningSession()
    x, y, z = (session.alloc(Flat.unknown()) for _ in range(3))
    decide(session, x, True)
    derive(session, y, True, x)
    decide(session, z, True)
    derive(session, y, False, z)
    return session, (x, y, z)


class TestBuildGraph:
    """Test build_graph()."""

    def test_nodes_and_edges(self, two_level_conflict):
        session, (x, y, z) = two_level_conflict
        graph = build_graph(session, y)
        assert sorted(graph.nodes) == [3, 4, 5, 6]
        assert graph.edges == {(3, 4), (4, 6), (5, 6)}
        assert graph.conflict == 6
        assert graph.nodes[6].value.is_top
        assert [e.cell for e in graph.decisions()] == [x, z]

    def test_edges_go_forward(self, two_level_conflict):
        session, (_, y, _) = two_level_conflict
        graph = build_graph(session, y)
        assert all(source < target for source, target in graph.edges)

    def test_closure(self, two_level_conflict):
        session, (_, y, _) = two_level_conflict
        graph = build_graph(session, y)
        assert graph.closure(4) == {3, 4}
        assert graph.antecedents(6) == [4, 5]

    def test_cell_without_assignments(self, two_level_conflict):
        session, _ = two_level_conflict
        with pytest.raises(MalformedSessionError, match="no recorded assignment"):
            build_graph(session, CellId(99, -1))

    def test_value_written_behind_the_sessions_back(self):
        session = ClauseLearningSession()
        a, b = session.alloc(Flat.unknown()), session.alloc(Flat.unknown())
        session.product.write(a, Flat.of(True))
        derive(session, b, True, a)
        with pytest.raises(MalformedSessionError, match="precedes event"):
            build_graph(session, b)

    def test_read_is_linked_to_the_write_it_saw(self):
        session = ClauseLearningSession()
        cell = session.alloc(0)
        session.mark_decision()
        session.write(cell, 1)
        session.read(cell)
        session.mark_decision()
        session.write(cell, 2)
        # Same value as the decision at level 1, but a different event
        session.write(cell, 1)
        result = session.alloc(True)
        graph = build_graph(session, result)
        assert sorted(graph.nodes) == [1, 4]
        assert graph.edges == {(1, 4)}
        clause, backjump = analyze_conflict(graph)
        assert clause.render() == "(p0 != 1)"
        assert backjump == 0

    def test_hand_drawn_implication_graph(self):
        # (x v y), (!y v z), (!x), (!z) with x, y, z = 1, 2, 3
        state = SearchState(3)
        clauses = [(1, 2), (-2, 3), (-1,), (-3,)]
        outcome = unit_propagate(state.session, clauses, state.cells)
        graph = build_graph(state.session, outcome.conflict)

        def label(index):
            event = graph.nodes[index]
            return f"{state.names()[event.cell]}={event.value}"

        assert {label(i) for i in graph.nodes} == {
            "x1=false",
            "x3=false",
            "x2=true",
            "x2=conflict",
        }
        assert {(label(a), label(b)) for a, b in graph.edges} == {
            ("x1=false", "x2=true"),
            ("x2=true", "x2=conflict"),
            ("x3=false", "x2=conflict"),
        }
        assert not graph.decisions()
        with pytest.raises(UnsatisfiableError):
            analyze_conflict(graph)


class TestAnalyzeConflict:
    """Test analyze_conflict()."""

    def test_decision_cut(self, two_level_conflict):
        session, (x, y, z) = two_level_conflict
        clause, backjump = analyze_conflict(build_graph(session, z))
        assert {lit.cell for lit in clause} == {z}
        assert backjump == 0

        clause, backjump = analyze_conflict(build_graph(session, y))
        assert [lit.cell for lit in clause] == [x, z]
        assert clause.render() == "(p0 != true) v (p2 != true)"
        assert backjump == 1

    def test_first_uip_cut(self, two_level_conflict):
        session, (_, y, z) = two_level_conflict
        clause, backjump = analyze_conflict(
            build_graph(session, y), strategy=CutStrategy.UIP
        )
        assert [lit.cell for lit in clause] == [y, z]
        assert backjump == 1

    def test_first_uip_resolves_to_the_decision(self):
        session = ClauseLearningSession()
        x, y, w = (session.alloc(Flat.unknown()) for _ in range(3))
        decide(session, x, True)
        derive(session, y, True, x)
        derive(session, w, True, x)
        derive(session, w, False, y)
        clause, backjump = analyze_conflict(
            build_graph(session, w), strategy=CutStrategy.UIP
        )
        assert clause.render(lambda c: "xyw"[c.index]) == "(x != true)"
        assert backjump == 0

    def test_level_zero_conflict_is_unsatisfiable(self):
        session = ClauseLearningSession()
        a = session.alloc(Flat.unknown())
        derive(session, a, True)
        derive(session, a, False)
        for strategy in CutStrategy:
            with pytest.raises(UnsatisfiableError):
                analyze_conflict(build_graph(session, a), strategy=strategy)

    def test_unknown_conflict_event(self, two_level_conflict):
        session, (_, y, _) = two_level_conflict
        with pytest.raises(MalformedSessionError, match="not in the graph"):
            analyze_conflict(build_graph(session, y), conflict_event=1)


class TestEarliestDecision:
    """Test earliest_decision()."""

    def test_lowest_contributing_level(self, two_level_conflict):
        session, (_, y, z) = two_level_conflict
        assert earliest_decision(build_graph(session, y)) == 1
        assert earliest_decision(build_graph(session, z)) == 2


class TestExportDot:
    """Test export_dot()."""

    def test_exact_output(self, two_level_conflict):
        session, (_, y, _) = two_level_conflict
        assert export_dot(build_graph(session, y)) == (
            "digraph {\n"
            '  e3 [label="p0 = true @L1", shape=box];\n'
            '  e4 [label="p1 = true @L1"];\n'
            '  e5 [label="p2 = true @L2", shape=box];\n'
            '  e6 [label="p1 = conflict @L2", color=red];\n'
            "  e3 -> e4;\n"
            "  e4 -> e6;\n"
            "  e5 -> e6;\n"
            "}\n"
        )

    def test_output_is_well_formed(self, two_level_conflict):
        session, (_, y, _) = two_level_conflict
        assert_valid_dot(export_dot(build_graph(session, y), lambda c: f'"{c}"'))

    def test_empty_graph(self):
        assert export_dot(DepGraph()) == "digraph { }\n"

    def test_labels_round_trip_through_quoting(self, two_level_conflict):
        session, (_, y, _) = two_level_conflict
        graph = build_graph(session, y)

        def naming(cell):
            return f'say "p{cell.index}" \\ back'

        text = export_dot(graph, naming)
        assert_valid_dot(text)
        labels = [
            re.sub(r"\\(.)", r"\1", match)
            for match in re.findall(r'label="((?:[^"\\]|\\.)*)"', text)
        ]
        assert labels == [
            f"{naming(e.cell)} = {e.value} @L{e.level}"
            for _, e in sorted(graph.nodes.items())
        ]
        assert 'label="say \\"p0\\" \\\\ back = true @L1"' in text
