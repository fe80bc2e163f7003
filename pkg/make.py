#!/usr/bin/env python3
"""Development tasks for reason-cells.

Usage: python make.py <command> [<command> ...]

Commands run in the order given and stop at the first failure.
"""

import platform
import shutil
import site
import subprocess
import sys
from collections.abc import Callable
from pathlib import Path

ROOT = Path(__file__).parent.resolve()

SOURCES = ["src", "tests", "make.py"]
ARTIFACTS = [
    ".mypy_cache",
    ".pytest_cache",
    ".ruff_cache",
    ".coverage",
    "build",
    "dist",
    "htmlcov",
]
CNF_FILES = ROOT / "tests" / "cnf-files"
SUDOKU_FILES = ROOT / "tests" / "sudoku-files"

COMMANDS: dict[str, Callable[[], None]] = {}


def command(func: Callable[[], None]) -> Callable[[], None]:
    """Register ``func`` as a command named after it, with dashes."""
    COMMANDS[func.__name__.replace("_", "-")] = func
    return func


def run(cmd: list[str], check: bool = True) -> int:
    """Run ``cmd`` from the project root, echoing it first.

    A leading ``-m`` runs a module of the current interpreter.
    """
    if cmd[0] == "-m":
        cmd = [sys.executable, *cmd]
        shown = ["python", *cmd[1:]]
    else:
        shown = cmd
    print(f"\n$ {' '.join(shown)}", flush=True)
    returncode = subprocess.run(cmd, cwd=ROOT).returncode
    if check and returncode != 0:
        sys.exit(returncode)
    return returncode


@command
def clean() -> None:
    """Remove build artifacts and caches."""
    for name in ARTIFACTS:
        path = ROOT / name
        if path.is_dir():
            shutil.rmtree(path)
        elif path.is_file():
            path.unlink()
        else:
            continue
        print(f"Removed {path}")
    for pycache in ROOT.rglob("__pycache__"):
        shutil.rmtree(pycache)


@command
def lint() -> None:
    """Run the ruff linter."""
    run(["-m", "ruff", "check", *SOURCES])


@command
def format() -> None:
    """Format the code with ruff."""
    run(["-m", "ruff", "format", *SOURCES])


@command
def format_check() -> None:
    """Check formatting without changing files."""
    run(["-m", "ruff", "format", "--check", "--diff", *SOURCES])


@command
def typecheck() -> None:
    """Run mypy."""
    run(["-m", "mypy", *SOURCES])


@command
def test() -> None:
    """Run the test suite."""
    run(["-m", "pytest"])


@command
def test_cov() -> None:
    """Run the test suite with a coverage report."""
    run(["-m", "pytest", "--cov", "--cov-report=term-missing"])


@command
def test_oracle() -> None:
    """Run only the solver comparison against the truth-table reference."""
    run(["-m", "pytest", "-v", "tests/test_bruteforce_comparison.py"])


@command
def demo() -> None:
    """Run the CLI demos and solve a bundled CNF file."""
    run(["-m", "reason_cells.cli", "demo", "any", "0010"])
    run(
        ["-m", "reason_cells.cli", "demo", "sudoku"]
        + [str(SUDOKU_FILES / "duplicate-five.txt")]
    )
    # solve exits 10/20 on success
    run(
        ["-m", "reason_cells.cli", "solve", "--show-learned"]
        + [str(CNF_FILES / "needs-learning.cnf")],
        check=False,
    )


@command
def check() -> None:
    """Run lint, typecheck, format-check and test-cov."""
    print(f"Python {platform.python_version()}: {sys.executable}")
    print(f"Site-packages: {site.getsitepackages()}", flush=True)
    lint()
    typecheck()
    format_check()
    test_cov()


@command
def build() -> None:
    """Build the sdist and wheel with uv."""
    clean()
    run(["uv", "build"])


def main() -> int:
    names = sys.argv[1:]
    if not names or names[0] in ("-h", "--help", "help"):
        print(__doc__)
        print("Commands:")
        for name, func in COMMANDS.items():
            print(f"  {name:14} {func.__doc__ or ''}")
        return 0

    unknown = [name for name in names if name not in COMMANDS]
    if unknown:
        print(f"Unknown command: {', '.join(unknown)}")
        print(f"Available: {', '.join(COMMANDS)}")
        return 1

    for name in names:
        COMMANDS[name]()
    return 0


if __name__ == "__main__":
    sys.exit(main())
