"""
Box-drawing text rendering of circuit expressions. Channels run left to right: series products chain
horizontally (upstream on the left), concatenations stack vertically and feedback loops return over the top.
"""
from __future__ import annotations

import graphlib
import typing

from ezqhdl.circuit.expression import CircuitExpression, ComponentRef, Series, Concatenation, Feedback, \
    Permutation, Identity

_DIRECTIONS = {
    "─": "EW", "│": "NS", "┌": "ES", "┐": "SW", "└": "EN", "┘": "NW",
    "├": "ENS", "┤": "NSW", "┬": "ESW", "┴": "ENW", "┼": "ENSW",
}
_GLYPHS = {frozenset(dirs): glyph for glyph, dirs in _DIRECTIONS.items()}


def _glyph(directions: typing.Set[str]) -> str:
    if directions <= {"E", "W"}:
        return "─"

    if directions <= {"N", "S"}:
        return "│"

    return _GLYPHS[frozenset(directions)]


class _Block:

    def __init__(self, lines: typing.List[str], in_rows: typing.List[int], out_rows: typing.List[int]):
        self.lines = lines
        self.in_rows = in_rows
        self.out_rows = out_rows

    @property
    def height(self) -> int:
        return len(self.lines)

    @property
    def width(self) -> int:
        return len(self.lines[0]) if self.lines else 0


class _Canvas:

    def __init__(self, height: int, width: int):
        self._cells = [[" "] * width for _ in range(height)]

    def blit(self, block: _Block, row: int, col: int):
        for r, line in enumerate(block.lines):
            for c, ch in enumerate(line):
                if ch != " ":
                    self._cells[row + r][col + c] = ch

    def _add(self, row: int, col: int, directions: str):
        existing = set(_DIRECTIONS.get(self._cells[row][col], ""))
        self._cells[row][col] = _glyph(existing | set(directions))

    def hline(self, row: int, c0: int, c1: int, cap_start: bool = False, cap_end: bool = False):
        for c in range(c0, c1 + 1):
            directions = ("W" if c > c0 or not cap_start else "") + ("E" if c < c1 or not cap_end else "")
            self._add(row, c, directions)

    def vline(self, col: int, r0: int, r1: int):
        top, bottom = min(r0, r1), max(r0, r1)
        for r in range(top, bottom + 1):
            self._add(r, col, ("N" if r > top else "") + ("S" if r < bottom else ""))

    def to_block(self, in_rows: typing.List[int], out_rows: typing.List[int]) -> _Block:
        return _Block(["".join(row) for row in self._cells], in_rows, out_rows)


def _box(label: str, cdim: int) -> _Block:
    width = len(label) + 2
    lines = ["┌" + "─" * width + "┐"]
    for i in range(cdim):
        if i > 0:
            lines.append("│" + " " * width + "│")
        lines.append("┤" + (f" {label} " if i == 0 else " " * width) + "├")
    lines.append("└" + "─" * width + "┘")

    rows = [2 * i + 1 for i in range(cdim)]
    return _Block(lines, rows, rows)


def _identity(n: int) -> _Block:
    rows = [2 * i + 1 for i in range(n)]
    lines = ["─" if r in rows else " " for r in range(2 * n + 1)]
    return _Block(lines, rows, rows)


def _concatenation(blocks: typing.List[_Block]) -> _Block:
    width = max(b.width for b in blocks)
    canvas = _Canvas(sum(b.height for b in blocks), width)

    in_rows, out_rows = [], []
    offset = 0
    for b in blocks:
        canvas.blit(b, offset, 0)
        for r in b.out_rows:
            if b.width < width:
                canvas.hline(offset + r, b.width, width - 1)
        in_rows += [offset + r for r in b.in_rows]
        out_rows += [offset + r for r in b.out_rows]
        offset += b.height

    return canvas.to_block(in_rows, out_rows)


def _route_order(sources: typing.List[int], targets: typing.List[int], moving: typing.List[int]) -> typing.List[int]:
    """
    Column order for wires that change rows. A wire entering on row r must turn before the wire leaving on
    row r starts, otherwise both would share one horizontal run.
    """
    sorter = graphlib.TopologicalSorter({i: set() for i in moving})
    for i in moving:
        for j in moving:
            if i != j and sources[i] == targets[j]:
                sorter.add(j, i)

    return list(sorter.static_order())


def _series(downstream: _Block, upstream: _Block) -> _Block:
    sources, targets = upstream.out_rows, downstream.in_rows
    moving = [i for i in range(len(sources)) if sources[i] != targets[i]]
    order = _route_order(sources, targets, moving)

    join_width = 1 if not moving else len(moving) + 2
    height = max(upstream.height, downstream.height)
    canvas = _Canvas(height, upstream.width + join_width + downstream.width)
    canvas.blit(upstream, 0, 0)
    start = upstream.width
    end = upstream.width + join_width - 1
    canvas.blit(downstream, 0, end + 1)

    for i in range(len(sources)):
        if i not in moving:
            canvas.hline(sources[i], start, end)

    for column, i in enumerate(order, start=start + 1):
        canvas.hline(sources[i], start, column, cap_end=True)
        canvas.vline(column, sources[i], targets[i])
        canvas.hline(targets[i], column, end, cap_start=True)

    return canvas.to_block(list(upstream.in_rows), [r for r in downstream.out_rows])


def _feedback(inner: _Block, k: int, l: int) -> _Block:
    width = inner.width + 4
    canvas = _Canvas(inner.height + 1, width)
    canvas.blit(inner, 1, 2)

    in_rows = [r + 1 for r in inner.in_rows]
    out_rows = [r + 1 for r in inner.out_rows]
    loop_in, loop_out = in_rows[l - 1], out_rows[k - 1]

    canvas.hline(0, 0, width - 1, cap_start=True, cap_end=True)
    canvas.vline(0, 0, loop_in)
    canvas.vline(width - 1, 0, loop_out)
    canvas.hline(loop_in, 0, 1, cap_start=True)
    canvas.hline(loop_out, width - 2, width - 1, cap_end=True)

    for r in in_rows:
        if r != loop_in:
            canvas.hline(r, 0, 1)
    for r in out_rows:
        if r != loop_out:
            canvas.hline(r, width - 2, width - 1)

    return canvas.to_block([r for r in in_rows if r != loop_in], [r for r in out_rows if r != loop_out])


def _render(e: CircuitExpression) -> _Block:
    if isinstance(e, ComponentRef):
        return _box(e.label, e.cdim)

    if isinstance(e, Permutation):
        return _box(e.to_text(), e.cdim)

    if isinstance(e, Identity):
        return _identity(e.n)

    if isinstance(e, Series):
        return _series(_render(e.left), _render(e.right))

    if isinstance(e, Concatenation):
        return _concatenation([_render(o) for o in e.operands])

    if isinstance(e, Feedback):
        return _feedback(_render(e.inner), e.k, e.l)

    raise TypeError(f"Unknown circuit expression node {type(e).__name__}")


def render_text(e: CircuitExpression) -> str:
    block = _render(e)
    canvas = _Canvas(block.height, block.width + 2)
    canvas.blit(block, 0, 1)
    for r in block.in_rows:
        canvas.hline(r, 0, 0)
    for r in block.out_rows:
        canvas.hline(r, block.width + 1, block.width + 1)

    lines = [line.rstrip() for line in canvas.to_block([], []).lines]
    while lines and not lines[0]:
        lines.pop(0)
    while lines and not lines[-1]:
        lines.pop()

    return "\n".join(lines)
