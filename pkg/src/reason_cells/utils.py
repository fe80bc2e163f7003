"""Utility functions for rendering cells and values as text."""

from __future__ import annotations

from typing import Any, Callable

from .store import CellId

Naming = Callable[[CellId], str]


def cell_name(cell: CellId) -> str:
    """Return the default reason name of a cell.

    :param cell: The cell to name.
    :returns: ``p<index>``, e.g. ``p3``.
    """
    return f"p{cell.index}"


def render_value(value: Any, naming: Naming = cell_name) -> str:
    """Render a stored value the way reasons and graphs show it.

    Booleans are lower case, cell ids go through ``naming`` and any value
    with a ``render(naming)`` method (shape nodes, lattice values) renders
    itself.

    :param value: The value to render.
    :param naming: Function naming cells referenced by the value.
    :returns: The textual rendering.
    """
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, CellId):
        return naming(value)
    render = getattr(value, "render", None)
    if callable(render):
        return str(render(naming))
    return str(value)


def dot_escape(text: str) -> str:
    """Escape a string for use inside a double quoted DOT identifier.

    :param text: Raw label text.
    :returns: The text with backslashes and double quotes escaped.
    """
    return text.replace("\\", "\\\\").replace('"', '\\"')
