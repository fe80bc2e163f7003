"""Command-line interface for reason-cells."""

from __future__ import annotations

import logging
import sys
from pathlib import Path
from typing import Any

import click

from . import __version__
from .demos import demo_any, demo_sudoku, parse_bits, parse_sudoku
from .depgraph import CutStrategy
from .dimacs import parse_dimacs
from .solver import SolverOptions, SolverResult, SolverStatus, solve

EXIT_SAT = 10
EXIT_UNSAT = 20
EXIT_USAGE = 1

STATUS_EXIT_CODES = {
    SolverStatus.SAT: EXIT_SAT,
    SolverStatus.UNSAT: EXIT_UNSAT,
    SolverStatus.UNKNOWN: 0,
}


class ExitOneGroup(click.Group):
    """Command group whose usage errors exit with 1 instead of click's 2."""

    def make_context(
        self,
        info_name: str | None,
        args: list[str],
        parent: click.Context | None = None,
        **extra: Any,
    ) -> click.Context:
        try:
            return super().make_context(info_name, args, parent=parent, **extra)
        except click.UsageError as error:
            error.exit_code = EXIT_USAGE
            raise

    def invoke(self, ctx: click.Context) -> Any:
        try:
            return super().invoke(ctx)
        except click.UsageError as error:
            error.exit_code = EXIT_USAGE
            raise


def _read_text(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as error:
        raise click.ClickException(f"Cannot read {path}: {error}") from error


def _print_result(result: SolverResult, show_learned: bool) -> None:
    stats = result.stats
    click.echo(
        f"c decisions {stats.decisions} propagations {stats.propagations} "
        f"conflicts {stats.conflicts}"
    )
    if show_learned:
        for clause in result.learned:
            click.echo("c learned " + " ".join([*(str(lit) for lit in clause), "0"]))
    click.echo(f"s {result.status.value}")
    if result.model is not None:
        literals = [str(var if value else -var) for var, value in result.model.items()]
        click.echo("v " + " ".join([*literals, "0"]))


@click.group(cls=ExitOneGroup)
@click.version_option(version=__version__, prog_name="rcells")
@click.option("-v", "--verbose", is_flag=True, help="Log search steps to stderr.")
def cli(verbose: bool) -> None:
    """Dependency-tracking cells, a clause learning solver and demos."""
    if verbose:
        logging.basicConfig(
            level=logging.DEBUG,
            stream=sys.stderr,
            format="%(levelname)s %(name)s: %(message)s",
        )


@cli.command(name="solve")
@click.argument(
    "file",
    type=click.Path(exists=True, dir_okay=False, readable=True, path_type=Path),
)
@click.option(
    "--learn",
    type=click.Choice([s.value for s in CutStrategy]),
    default=CutStrategy.DECISION.value,
    show_default=True,
    help="Cut used to derive learned clauses.",
)
@click.option(
    "--max-conflicts",
    type=click.IntRange(min=1),
    default=None,
    help="Give up (s UNKNOWN) after this many conflicts.",
)
@click.option(
    "--max-seconds",
    type=click.FloatRange(min=0, min_open=True),
    default=None,
    help="Give up (s UNKNOWN) after this much time.",
)
@click.option(
    "--dot",
    "dot_file",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Write the last conflict's dependency graph as Graphviz DOT.",
)
@click.option(
    "--show-learned", is_flag=True, help="Print learned clauses as comment lines."
)
@click.pass_context
def solve_cmd(
    ctx: click.Context,
    file: Path,
    learn: str,
    max_conflicts: int | None,
    max_seconds: float | None,
    dot_file: Path | None,
    show_learned: bool,
) -> None:
    """Solve a DIMACS CNF file (exit 10 SAT, 20 UNSAT)."""
    try:
        formula = parse_dimacs(_read_text(file))
    except ValueError as error:
        raise click.ClickException(f"{file}: {error}") from error

    options = SolverOptions(CutStrategy(learn), max_conflicts, max_seconds)
    result = solve(formula, options)
    _print_result(result, show_learned)

    if dot_file is not None:
        dot = result.conflicts[-1].dot() if result.conflicts else "digraph { }\n"
        with dot_file.open("w", encoding="utf-8", newline="\n") as handle:
            handle.write(dot)
    ctx.exit(STATUS_EXIT_CODES[result.status])


@cli.group(cls=ExitOneGroup)
def demo() -> None:
    """Run the reason-tracking demos."""


@demo.command(name="any")
@click.argument("bits")
def demo_any_cmd(bits: str) -> None:
    """Fold `any` over BITS (e.g. 010) and print the reason of the result."""
    try:
        values = parse_bits(bits)
    except ValueError as error:
        raise click.BadParameter(str(error), param_hint="BITS") from error
    result = demo_any(values)
    click.echo("true" if result.value else "false")
    click.echo(result.reasons_text)


@demo.command(name="sudoku")
@click.argument(
    "file",
    type=click.Path(exists=True, dir_okay=False, readable=True, path_type=Path),
)
def demo_sudoku_cmd(file: Path) -> None:
    """Check the Sudoku grid in FILE and print the reason of the verdict."""
    try:
        grid = parse_sudoku(_read_text(file))
    except ValueError as error:
        raise click.ClickException(f"{file}: {error}") from error
    result = demo_sudoku(grid)
    click.echo("valid" if result.value else "invalid")
    click.echo(result.reasons_text)


if __name__ == "__main__":
    cli()
