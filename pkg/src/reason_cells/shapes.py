"""Recursive data types one layer at a time, distributed over cells.

A recursive type is described by a :class:`ShapeDescriptor` listing its
constructors. A :class:`ShapeNode` is one layer of it: a constructor tag, its
non-recursive payload and its child slots. Child slots are whatever the
context needs: nested :class:`FixValue` objects, cell ids, or lens handles.

Folds are Mendler style: a step receives a ``recurse`` capability and a node,
and a child slot is only ever consumed by calling ``recurse`` on it. When the
children live in cells this makes every descent an explicit (and trackable)
read, so a fold only reads what it needs.

Steps come in two flavours:

* direct style, ``return recurse(child)``, limited by the interpreter's
  recursion depth;
* generator style, ``return (yield recurse(child))``, driven with an explicit
  stack so arbitrarily deep structures can be folded.
"""

from __future__ import annotations

import inspect
from collections.abc import Generator, Iterable
from dataclasses import dataclass
from typing import Any, Callable, Generic, TypeVar

from .store import CellId, VarStore
from .utils import Naming, cell_name, render_value

# Cycle guard for folds over cells
DEFAULT_DEPTH_LIMIT = 1_000_000

R = TypeVar("R")
S = TypeVar("S")

Recurse = Callable[[Any], Any]
MendlerStep = Callable[[Recurse, "ShapeNode[Any]"], Any]


class ShapeError(ValueError):
    """A node does not conform to its shape, or a step misbehaved."""


class CyclicStructureError(ValueError):
    """A fold went deeper than its depth limit or the interpreter stack."""


@dataclass(frozen=True)
class Constructor:
    """One constructor of a shape: its tag and how many fields of each kind."""

    tag: str
    payload_arity: int = 0
    child_arity: int = 0


@dataclass(frozen=True)
class ShapeDescriptor:
    """Runtime description of a shape functor."""

    name: str
    constructors: tuple[Constructor, ...]

    def __post_init__(self) -> None:
        tags = [c.tag for c in self.constructors]
        if len(tags) != len(set(tags)):
            raise ShapeError(f"Shape {self.name} has duplicated constructor tags.")

    def constructor(self, tag: str) -> Constructor:
        """Return the constructor named ``tag``.

        :raises ShapeError: If the shape has no such constructor.
        """
        for constructor in self.constructors:
            if constructor.tag == tag:
                return constructor
        raise ShapeError(f"Shape {self.name} has no constructor '{tag}'.")

    def validate(self, node: ShapeNode[Any]) -> None:
        """Check the arities of ``node`` against its constructor.

        :raises ShapeError: If the tag is unknown or an arity differs.
        """
        constructor = self.constructor(node.tag)
        if (
            len(node.payload) != constructor.payload_arity
            or len(node.children) != constructor.child_arity
        ):
            raise ShapeError(
                f"Node {node} does not match {self.name}.{constructor.tag}: "
                f"expected {constructor.payload_arity} payload and "
                f"{constructor.child_arity} child fields."
            )


@dataclass(frozen=True)
class ShapeNode(Generic[R]):
    """One layer of a recursive value."""

    tag: str
    payload: tuple[Any, ...] = ()
    children: tuple[R, ...] = ()

    def map_children(self, f: Callable[[R], S]) -> ShapeNode[S]:
        """Return the same layer with ``f`` applied to every child slot."""
        return ShapeNode(self.tag, self.payload, tuple(f(c) for c in self.children))

    def render(self, naming: Naming = cell_name) -> str:
        """Render as reasons show values, e.g. ``lcons false p2``."""
        parts = [self.tag]
        for field in (*self.payload, *self.children):
            text = render_value(field, naming)
            parts.append(f"({text})" if " " in text else text)
        return " ".join(parts)

    def __str__(self) -> str:
        fields = [render_value(p) for p in self.payload]
        fields.extend(str(c) for c in self.children)
        if not fields:
            return self.tag
        return f"{self.tag}({', '.join(fields)})"


@dataclass(frozen=True)
class Descend:
    """Request yielded by a generator step: fold this child slot."""

    slot: Any


class _FoldRun:
    """State of one fold: the step, how slots are opened, and the depth."""

    def __init__(
        self,
        step: MendlerStep,
        expose: Callable[[Any], ShapeNode[Any]],
        depth_limit: int,
    ) -> None:
        self.step = step
        self.expose = expose
        self.depth_limit = depth_limit
        self.generator_mode = False
        self.depth = 0

    def _too_deep(self) -> CyclicStructureError:
        return CyclicStructureError(
            f"Fold exceeded the depth limit of {self.depth_limit}; "
            "the structure is probably cyclic."
        )

    def recurse(self, slot: Any) -> Any:
        if self.generator_mode:
            return Descend(slot)
        if self.depth >= self.depth_limit:
            raise self._too_deep()
        self.depth += 1
        try:
            result = self.step(self.recurse, self.expose(slot))
        finally:
            self.depth -= 1
        if inspect.isgenerator(result):
            raise ShapeError("A direct style fold step returned a generator.")
        return result

    def run(self, root: Any) -> Any:
        try:
            result = self.step(self.recurse, self.expose(root))
        except RecursionError as error:
            raise CyclicStructureError(
                "Fold ran out of interpreter stack; the structure is cyclic or too "
                "deep for a direct style step. Generator steps do not use the "
                "interpreter stack."
            ) from error
        if not inspect.isgenerator(result):
            return result
        # Generator bodies have not started yet, so recurse switches mode safely
        self.generator_mode = True
        return self._drive(result)

    def _drive(self, gen: Generator[Any, Any, Any]) -> Any:
        stack: list[Generator[Any, Any, Any]] = []
        reply: Any = None
        while True:
            try:
                request = gen.send(reply)
            except StopIteration as stop:
                if not stack:
                    return stop.value
                gen = stack.pop()
                reply = stop.value
                continue
            if not isinstance(request, Descend):
                raise ShapeError(
                    f"Generator fold steps must yield recurse(slot), got {request!r}."
                )
            if len(stack) + 1 > self.depth_limit:
                raise self._too_deep()
            child = self.step(self.recurse, self.expose(request.slot))
            if inspect.isgenerator(child):
                stack.append(gen)
                gen = child
                reply = None
            else:
                reply = child


class FixValue:
    """A finite recursive value that folds itself with any Mendler step."""

    __slots__ = ("layer",)

    def __init__(self, layer: ShapeNode[FixValue]) -> None:
        self.layer = layer

    def fold(self, step: MendlerStep, *, depth_limit: int = DEFAULT_DEPTH_LIMIT) -> Any:
        """Fold this value; ``recurse`` folds a child with the same step."""
        return _FoldRun(step, _layer_of, depth_limit).run(self)

    def __repr__(self) -> str:
        return f"FixValue({self.layer})"


def _layer_of(value: FixValue) -> ShapeNode[FixValue]:
    if not isinstance(value, FixValue):
        raise ShapeError(f"Expected a FixValue child slot, got {value!r}.")
    return value.layer


def fix_in(node: ShapeNode[FixValue], shape: ShapeDescriptor | None = None) -> FixValue:
    """Wrap one layer whose children are already recursive values.

    :param node: The top layer.
    :param shape: Optional descriptor to validate the layer against.
    :returns: The recursive value.
    :raises ShapeError: If ``shape`` is given and the layer does not conform.
    """
    if shape is not None:
        shape.validate(node)
    return FixValue(node)


def _expose_step(
    recurse: Recurse, node: ShapeNode[Any]
) -> Generator[Any, Any, ShapeNode[FixValue]]:
    children = []
    for child in node.children:
        children.append(fix_in((yield recurse(child))))
    return ShapeNode(node.tag, node.payload, tuple(children))


def fix_out(
    value: FixValue, shape: ShapeDescriptor | None = None
) -> ShapeNode[FixValue]:
    """Expose the top constructor of a recursive value.

    Implemented as a fold, so the children of the result are rebuilt values
    that fold exactly like the originals.

    :param value: A value built with :func:`fix_in`.
    :param shape: Optional descriptor to validate the exposed layer against.
    :returns: The top layer with recursive values as children.
    """
    node: ShapeNode[FixValue] = value.fold(_expose_step)
    if shape is not None:
        shape.validate(node)
    return node


def mendler_fold(
    step: MendlerStep, value: FixValue, *, depth_limit: int = DEFAULT_DEPTH_LIMIT
) -> Any:
    """Fold a recursive value with a Mendler step."""
    return value.fold(step, depth_limit=depth_limit)


def distribute(store: VarStore, value: FixValue) -> CellId:
    """Allocate one cell per layer of ``value``, children first.

    Each cell holds a :class:`ShapeNode` whose children are cell ids. For a
    list built from ``[false, true, false]`` in an empty store the nil layer
    gets ``c0`` and the root gets ``c3``.

    :param store: Store to allocate in (any wrapper works, e.g. a session).
    :param value: The recursive value to spread over cells.
    :returns: The root cell.
    """

    def alloc_step(
        recurse: Recurse, node: ShapeNode[Any]
    ) -> Generator[Any, Any, CellId]:
        cells = []
        for child in node.children:
            cells.append((yield recurse(child)))
        return store.alloc(ShapeNode(node.tag, node.payload, tuple(cells)))

    cell: CellId = mendler_fold(alloc_step, value)
    return cell


def cell_fold(
    store: VarStore,
    step: MendlerStep,
    root: CellId | LensHandle,
    *,
    shape: ShapeDescriptor | None = None,
    depth_limit: int = DEFAULT_DEPTH_LIMIT,
) -> Any:
    """Fold a structure distributed over cells.

    The root is read first; a child cell is read only when the step calls
    ``recurse`` on its slot. Slots may be cell ids or lens handles.

    :param store: Store holding the cells; reads go through it.
    :param step: The Mendler step.
    :param root: Root cell (or lens handle onto it).
    :param shape: Optional descriptor every visited node is validated against.
    :param depth_limit: Maximum number of nested descents.
    :returns: The fold result.
    :raises CyclicStructureError: If the depth limit is exceeded.
    :raises ShapeError: If a visited cell does not hold a conforming node.
    """

    def expose(slot: Any) -> ShapeNode[Any]:
        if isinstance(slot, LensHandle):
            node = lens_read(store, slot)
        else:
            node = store.read(slot)
        if not isinstance(node, ShapeNode):
            raise ShapeError(f"Cell {slot} does not hold a shape node: {node!r}.")
        if shape is not None:
            shape.validate(node)
        return node

    return _FoldRun(step, expose, depth_limit).run(root)


def eager_cell_fold(
    store: VarStore,
    algebra: Callable[[ShapeNode[Any]], Any],
    root: CellId | LensHandle,
    *,
    shape: ShapeDescriptor | None = None,
    depth_limit: int = DEFAULT_DEPTH_LIMIT,
) -> Any:
    """Fold with an ordinary algebra, reading every cell of the structure.

    :param algebra: Function from a layer of child results to a result.
    :returns: The fold result.
    """

    def eager_step(recurse: Recurse, node: ShapeNode[Any]) -> Generator[Any, Any, Any]:
        results = []
        for child in node.children:
            results.append((yield recurse(child)))
        return algebra(ShapeNode(node.tag, node.payload, tuple(results)))

    return cell_fold(store, eager_step, root, shape=shape, depth_limit=depth_limit)


def _identity(value: Any) -> Any:
    return value


@dataclass(frozen=True)
class LensHandle:
    """Read-only view of a cell through a pure transformation."""

    origin: CellId
    view: Callable[[Any], Any] = _identity

    def map(self, f: Callable[[Any], Any]) -> LensHandle:
        """Return a handle whose view is ``f`` after this handle's view."""
        view = self.view
        return LensHandle(self.origin, lambda raw: f(view(raw)))


def lens(cell: CellId) -> LensHandle:
    """Return the identity lens onto ``cell``."""
    return LensHandle(cell)


def lens_map(handle: LensHandle, f: Callable[[Any], Any]) -> LensHandle:
    """Compose ``f`` onto the view of ``handle``."""
    return handle.map(f)


def lens_read(store: VarStore, handle: LensHandle) -> Any:
    """Read the origin cell through ``store`` and apply the view."""
    return handle.view(store.read(handle.origin))


# Lists

LIST_SHAPE = ShapeDescriptor(
    "List",
    (Constructor("nil"), Constructor("lcons", payload_arity=1, child_arity=1)),
)


def nil() -> ShapeNode[Any]:
    return ShapeNode("nil")


def lcons(head: Any, tail: R) -> ShapeNode[R]:
    return ShapeNode("lcons", (head,), (tail,))


def fix_list(values: Iterable[Any]) -> FixValue:
    """Build a recursive list value from a Python iterable."""
    result = fix_in(nil())
    for value in reversed(list(values)):
        result = fix_in(lcons(value, result))
    return result


def any_step(recurse: Recurse, node: ShapeNode[Any]) -> Generator[Any, Any, bool]:
    """True when some element is true; stops at the first true element."""
    if node.tag == "nil":
        return False
    if node.payload[0]:
        return True
    result: bool = yield recurse(node.children[0])
    return result


def length_step(recurse: Recurse, node: ShapeNode[Any]) -> Generator[Any, Any, int]:
    if node.tag == "nil":
        return 0
    rest: int = yield recurse(node.children[0])
    return 1 + rest


def sum_step(recurse: Recurse, node: ShapeNode[Any]) -> Generator[Any, Any, Any]:
    if node.tag == "nil":
        return 0
    rest = yield recurse(node.children[0])
    return node.payload[0] + rest


def to_tuple_step(
    recurse: Recurse, node: ShapeNode[Any]
) -> Generator[Any, Any, tuple[Any, ...]]:
    if node.tag == "nil":
        return ()
    rest: tuple[Any, ...] = yield recurse(node.children[0])
    return (node.payload[0], *rest)


def rebuild_step(
    recurse: Recurse, node: ShapeNode[Any]
) -> Generator[Any, Any, FixValue]:
    """Wrap every layer back up; folding with it is the identity."""
    children = []
    for child in node.children:
        children.append((yield recurse(child)))
    return fix_in(ShapeNode(node.tag, node.payload, tuple(children)))
