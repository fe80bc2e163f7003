"""DIMACS CNF parsing and rendering."""

from __future__ import annotations

from dataclasses import dataclass


class DimacsError(ValueError):
    """Malformed DIMACS input; ``line`` is the 1-based line number."""

    def __init__(self, message: str, line: int) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class CnfFormula:
    """A formula in conjunctive normal form over variables 1..num_vars."""

    num_vars: int
    clauses: tuple[tuple[int, ...], ...]


def parse_dimacs(text: str) -> CnfFormula:
    """Parse DIMACS CNF text.

    Comment lines start with ``c``, the header is ``p cnf <vars> <clauses>``
    and every clause is a list of non-zero literals terminated by ``0``.
    Clauses may span lines. A ``%`` line ends the input. An empty clause is
    kept (the formula is then trivially unsatisfiable).

    :param text: The DIMACS file contents.
    :returns: The parsed formula.
    :raises DimacsError: If the header is missing or malformed, a token is not
        an integer, a literal is out of range, or the clause count differs
        from the header.
    """
    num_vars: int | None = None
    num_clauses = 0
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    last_line = 0

    for line_no, raw_line in enumerate(text.replace("\r", "").split("\n"), start=1):
        line = raw_line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        last_line = line_no
        if line.startswith("p"):
            if num_vars is not None:
                raise DimacsError("Duplicated header.", line_no)
            fields = line.split()
            if (
                len(fields) != 4
                or fields[1] != "cnf"
                or not fields[2].isdigit()
                or not fields[3].isdigit()
            ):
                raise DimacsError(f"Malformed header '{line}'.", line_no)
            num_vars, num_clauses = int(fields[2]), int(fields[3])
            continue
        if num_vars is None:
            raise DimacsError("Clause found before the 'p cnf' header.", line_no)
        for token in line.split():
            try:
                literal = int(token)
            except ValueError:
                raise DimacsError(f"'{token}' is not an integer.", line_no) from None
            if literal == 0:
                clauses.append(tuple(current))
                current = []
            elif abs(literal) > num_vars:
                raise DimacsError(
                    f"Literal {literal} is out of range 1..{num_vars}.", line_no
                )
            else:
                current.append(literal)

    if num_vars is None:
        raise DimacsError("Missing 'p cnf' header.", 1)
    if current:
        clauses.append(tuple(current))
    if len(clauses) != num_clauses:
        raise DimacsError(
            f"Header declares {num_clauses} clauses but {len(clauses)} were found.",
            max(last_line, 1),
        )
    return CnfFormula(num_vars, tuple(clauses))


def render_dimacs(formula: CnfFormula) -> str:
    """Render a formula as DIMACS CNF text."""
    lines = [f"p cnf {formula.num_vars} {len(formula.clauses)}"]
    for clause in formula.clauses:
        lines.append(" ".join([*(str(lit) for lit in clause), "0"]))
    return "\n".join(lines) + "\n"
