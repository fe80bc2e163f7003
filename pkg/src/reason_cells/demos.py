"""Small programs whose reasons can be read by a person.

``demo_any`` folds a Boolean list that was distributed over cells and shows
that the result depends only on the prefix up to the first ``true``.
``demo_sudoku`` checks a grid and, when it is invalid, names the cells of
the violated row, column or box.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from typing import Any, NamedTuple

from .reasons import ClauseLearningSession, render_reasons
from .shapes import LIST_SHAPE, any_step, cell_fold, distribute, fix_list
from .store import CellId

Grid = tuple[tuple[int, ...], ...]
Position = tuple[int, int]

SUDOKU_SIZE = 9
BOX_SIZE = 3
EMPTY_CHARS = ".0_"


class SudokuGridError(ValueError):
    """The grid is not 9 rows of 9 digits (0 for empty)."""


class DemoResult(NamedTuple):
    value: Any
    reasons_text: str


def demo_any(
    bits: Iterable[bool], session: ClauseLearningSession | None = None
) -> DemoResult:
    """Compute ``any`` over a distributed list and explain the result.

    The list is stored one node per cell, the fold runs inside a session,
    and the result is allocated into a fresh cell whose reason is rendered.

    :param bits: The list elements.
    :param session: Session to run in, a new one by default.
    :returns: The result and the rendered reason of its cell.
    """
    session = session if session is not None else ClauseLearningSession()
    root = distribute(session, fix_list(bits))
    found: bool = cell_fold(session, any_step, root, shape=LIST_SHAPE)
    result = session.alloc(found)
    return DemoResult(found, render_reasons(session.get_reasons(result)))


def parse_bits(text: str) -> list[bool]:
    """Parse a string of ``0``/``1`` characters.

    :raises ValueError: If any other character is present.
    """
    bad = sorted(set(text) - {"0", "1"})
    if bad:
        raise ValueError(f"Bits must be 0 or 1, found {''.join(bad)!r}.")
    return [char == "1" for char in text]


def validate_grid(grid: Sequence[Sequence[int]]) -> Grid:
    """Return the grid as a tuple of tuples.

    :raises SudokuGridError: If the grid is not 9x9 or holds a value
        outside 0..9.
    """
    rows = tuple(tuple(row) for row in grid)
    if len(rows) != SUDOKU_SIZE or any(len(row) != SUDOKU_SIZE for row in rows):
        raise SudokuGridError("A Sudoku grid must have 9 rows of 9 cells.")
    for r, row in enumerate(rows, start=1):
        for c, digit in enumerate(row, start=1):
            if isinstance(digit, bool) or not isinstance(digit, int):
                raise SudokuGridError(f"Cell ({r} , {c}) is not a digit: {digit!r}.")
            if not 0 <= digit <= SUDOKU_SIZE:
                raise SudokuGridError(f"Cell ({r} , {c}) is out of range: {digit}.")
    return rows


def parse_sudoku(text: str) -> Grid:
    """Parse a grid written as 9 lines of 9 characters.

    Digits 1-9 are givens; ``.``, ``0`` or ``_`` is an empty cell. Spaces
    and ``|`` separators are ignored, as are blank lines, lines of ``-`` or
    ``+`` separators and lines starting with ``#``.

    :param text: The grid text.
    :returns: The grid, 0 for empty cells.
    :raises SudokuGridError: If the text is not a 9x9 grid.
    """
    rows: list[tuple[int, ...]] = []
    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.replace(" ", "").replace("|", "").strip()
        if not line or line.startswith("#") or set(line) <= set("-+"):
            continue
        row = []
        for char in line:
            if char in EMPTY_CHARS:
                row.append(0)
            elif char.isdigit():
                row.append(int(char))
            else:
                raise SudokuGridError(f"line {line_no}: unexpected character {char!r}.")
        if len(row) != SUDOKU_SIZE:
            raise SudokuGridError(
                f"line {line_no}: expected 9 cells but found {len(row)}."
            )
        rows.append(tuple(row))
    return validate_grid(rows)


def sudoku_units() -> list[list[Position]]:
    """Return every row, then every column, then every box (0-based positions)."""
    rows = [[(r, c) for c in range(SUDOKU_SIZE)] for r in range(SUDOKU_SIZE)]
    columns = [[(r, c) for r in range(SUDOKU_SIZE)] for c in range(SUDOKU_SIZE)]
    boxes = [
        [(br + r, bc + c) for r in range(BOX_SIZE) for c in range(BOX_SIZE)]
        for br in range(0, SUDOKU_SIZE, BOX_SIZE)
        for bc in range(0, SUDOKU_SIZE, BOX_SIZE)
    ]
    return rows + columns + boxes


def check_sudoku(grid: Sequence[Sequence[int]]) -> bool:
    """True when no row, column or box repeats a digit. Reads nothing."""
    rows = validate_grid(grid)
    for unit in sudoku_units():
        digits = [rows[r][c] for r, c in unit if rows[r][c]]
        if len(digits) != len(set(digits)):
            return False
    return True


def demo_sudoku(
    grid: Sequence[Sequence[int]], session: ClauseLearningSession | None = None
) -> DemoResult:
    """Check a partial grid inside a session and explain the verdict.

    Cells are allocated in row-major order. Each row, column and box is read
    in its own window and the scan stops at the first repeated digit, so an
    invalid verdict's reason is the reads of the violated unit up to the
    repeat. A valid verdict depends on every unit's reads.

    :param grid: 9x9 digits, 0 for empty.
    :param session: Session to run in, a new one by default.
    :returns: The verdict and its reason, cells named ``sfield at (r , c)``.
    :raises SudokuGridError: If the grid is malformed.
    """
    rows = validate_grid(grid)
    session = session if session is not None else ClauseLearningSession()
    cells = {
        (r, c): session.alloc(rows[r][c])
        for r in range(SUDOKU_SIZE)
        for c in range(SUDOKU_SIZE)
    }
    positions = {cell: pos for pos, cell in cells.items()}

    def naming(cell: CellId) -> str:
        r, c = positions[cell]
        return f"sfield at ({r + 1} , {c + 1})"

    session.reset_assignments()
    checked = []
    valid = True
    for unit in sudoku_units():
        seen: set[int] = set()
        for pos in unit:
            digit: int = session.read(cells[pos])
            if digit and digit in seen:
                valid = False
                break
            seen.add(digit)
        if not valid:
            break
        checked.append(session.reset_assignments())

    if valid:
        for window in checked:
            session.extend_assignments(window)
    verdict = session.alloc(valid)
    return DemoResult(valid, render_reasons(session.get_reasons(verdict), naming))
