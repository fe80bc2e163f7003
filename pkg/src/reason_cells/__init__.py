"""
reason_cells - Dependency-tracking cells that remember why they hold a value.

Recursive data is spread over typed cells, every read is tracked, and every
assignment records the reads that caused it. Folds and solvers written
against the store get dependency graphs and learned clauses without extra
bookkeeping; a small clause learning SAT solver is included.
"""

from __future__ import annotations

from .demos import DemoResult, check_sudoku, demo_any, demo_sudoku, parse_sudoku
from .depgraph import (
    CutStrategy,
    DepGraph,
    LearnedClause,
    Literal,
    analyze_conflict,
    build_graph,
    earliest_decision,
    export_dot,
)
from .dimacs import CnfFormula, parse_dimacs, render_dimacs
from .lattice import (
    CandidateSet,
    ConstrainedStore,
    Flat,
    MergeOutcome,
    is_conflict,
    merge_write,
)
from .reasons import (
    ClauseLearningSession,
    ProductStore,
    ReasonLog,
    TupleCell,
    render_reasons,
)
from .shapes import (
    FixValue,
    LensHandle,
    ShapeDescriptor,
    ShapeNode,
    cell_fold,
    distribute,
    fix_in,
    fix_list,
    fix_out,
    lens,
    lens_map,
    lens_read,
    mendler_fold,
)
from .solver import SolverOptions, SolverResult, SolverStatus, replay, solve
from .store import CellId, Store
from .tracking import AssignmentContainer, AssignmentEntry, TrackingStore

__version__ = "0.1.0"

__all__ = [
    "AssignmentContainer",
    "AssignmentEntry",
    "CandidateSet",
    "CellId",
    "ClauseLearningSession",
    "CnfFormula",
    "ConstrainedStore",
    "CutStrategy",
    "DemoResult",
    "DepGraph",
    "FixValue",
    "Flat",
    "LearnedClause",
    "LensHandle",
    "Literal",
    "MergeOutcome",
    "ProductStore",
    "ReasonLog",
    "ShapeDescriptor",
    "ShapeNode",
    "SolverOptions",
    "SolverResult",
    "SolverStatus",
    "Store",
    "TrackingStore",
    "TupleCell",
    "analyze_conflict",
    "build_graph",
    "cell_fold",
    "check_sudoku",
    "demo_any",
    "demo_sudoku",
    "distribute",
    "earliest_decision",
    "export_dot",
    "fix_in",
    "fix_list",
    "fix_out",
    "is_conflict",
    "lens",
    "lens_map",
    "lens_read",
    "mendler_fold",
    "merge_write",
    "parse_dimacs",
    "parse_sudoku",
    "render_dimacs",
    "render_reasons",
    "replay",
    "solve",
]
