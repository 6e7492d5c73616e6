"""Lower selective-transfer schedules to grid-transfer schedules.

A masked swap ``(r1, r2, mask)`` is a set of point pairs ``[r1]_i <-> [r2]_i``.
Any sub-rectangle of mask positions (a row-position subset times a
column-position subset, all selected) is itself a legal unmasked swap, and the
pairs of different sub-rectangles are disjoint, so the pieces may run in any
order.
"""

from __future__ import annotations

from typing import Sequence

from .core import (
    MaskedRectSwap, Model, Rectangle, RectSwap, RoutingStep, Schedule, Shape,
    validate_step,
)

__all__ = [
    "lower_masked_swap", "lower_schedule", "greedy_rectangle_decomposition",
    "per_line_decomposition",
]

PositionRect = tuple[tuple[int, ...], tuple[int, ...]]


def _grid(mask: Sequence[bool], ncols: int) -> list[list[bool]]:
    return [list(mask[i:i + ncols]) for i in range(0, len(mask), ncols)]


def per_line_decomposition(grid: list[list[bool]], by: str = "auto") -> list[PositionRect]:
    """One rectangle per non-empty row (or column) of a boolean position grid.

    ``by="auto"`` picks rows when there are no more rows than columns.
    """
    nrows = len(grid)
    ncols = len(grid[0]) if grid else 0
    if by == "auto":
        by = "rows" if nrows <= ncols else "cols"
    out = []
    if by == "rows":
        for i, row in enumerate(grid):
            sel = tuple(j for j, v in enumerate(row) if v)
            if sel:
                out.append(((i,), sel))
    elif by == "cols":
        for j in range(ncols):
            sel = tuple(i for i in range(nrows) if grid[i][j])
            if sel:
                out.append((sel, (j,)))
    else:
        raise ValueError(f"unknown decomposition axis {by!r}")
    return out


def _largest_rectangle(grid: list[list[bool]]) -> tuple[int, int, int, int] | None:
    """Max-area all-true contiguous block as ``(top, left, height, width)``.

    Row-by-row histogram with a monotone stack; ties keep the first found.
    """
    ncols = len(grid[0])
    heights = [0] * ncols
    best, best_area = None, 0
    for i, row in enumerate(grid):
        for j in range(ncols):
            heights[j] = heights[j] + 1 if row[j] else 0
        stack: list[int] = []
        for j in range(ncols + 1):
            h = heights[j] if j < ncols else 0
            while stack and heights[stack[-1]] >= h:
                top = stack.pop()
                left = stack[-1] + 1 if stack else 0
                area = heights[top] * (j - left)
                if area > best_area:
                    best_area = area
                    best = (i - heights[top] + 1, left, heights[top], j - left)
            stack.append(j)
    return best


def greedy_rectangle_decomposition(grid: list[list[bool]]) -> list[PositionRect]:
    """Cover the true cells with disjoint rectangles, largest block first.

    Falls back to the per-row/per-column cover whenever that is not larger,
    so the result never uses more pieces than the per-line method.
    """
    if not grid or not any(any(row) for row in grid):
        return []
    work = [list(row) for row in grid]
    out: list[PositionRect] = []
    while True:
        block = _largest_rectangle(work)
        if block is None:
            break
        top, left, h, w = block
        rows = tuple(range(top, top + h))
        cols = tuple(range(left, left + w))
        for i in rows:
            for j in cols:
                work[i][j] = False
        out.append((rows, cols))
    baseline = per_line_decomposition(grid)
    return out if len(out) <= len(baseline) else baseline


def _to_swap(step: MaskedRectSwap, piece: PositionRect) -> RectSwap:
    rows, cols = piece
    return RectSwap(
        Rectangle(tuple(step.r1.rows[i] for i in rows), tuple(step.r1.cols[j] for j in cols)),
        Rectangle(tuple(step.r2.rows[i] for i in rows), tuple(step.r2.cols[j] for j in cols)),
    )


def lower_masked_swap(shape: Shape, step: RoutingStep, method: str = "lines") -> list[RectSwap]:
    """Unmasked swaps whose composition equals ``step``.

    ``method="lines"`` uses one swap per selected row of ``r1`` (or per
    column when ``r1`` has fewer columns than rows); ``method="greedy"`` uses
    :func:`greedy_rectangle_decomposition`.  Either way the count is at most
    ``min(len(r1.rows), len(r1.cols))``.
    """
    check = validate_step(Model.SELECTIVE, shape, step)
    if not check:
        raise ValueError(f"illegal step: {check.reason}")
    if isinstance(step, RectSwap):
        return [step]
    grid = _grid(step.mask, len(step.r1.cols))
    if method == "lines":
        pieces = per_line_decomposition(grid)
    elif method == "greedy":
        pieces = greedy_rectangle_decomposition(grid)
    else:
        raise ValueError(f"unknown lowering method {method!r}")
    return [_to_swap(step, piece) for piece in pieces]


def lower_schedule(schedule: Schedule, method: str = "lines") -> Schedule:
    """Rewrite a selective-transfer schedule with grid transfers only."""
    steps: list[RectSwap] = []
    for step in schedule.steps:
        steps.extend(lower_masked_swap(schedule.shape, step, method))
    return Schedule(Model.GRID, schedule.shape, tuple(steps))
