"""Column-sparse routing with grid transfers.

Each round picks pairs ``(q, sigma(q))`` whose four columns are unused by any
other picked pair, gathers the sources into row 0 and the targets into row 1
by folding rows in half (compression), lines the sources up in the order of
their targets with 1D swaps inside row 0, exchanges the two rows with one
rectangle swap, and unfolds.  Every source then sits at its destination and
every atom outside the picked pairs is back where the round found it.

A round costs at most ``4*ceil(log2 rows) + ceil(log2 cols) + 1`` steps,
i.e. ``5*ceil(log2 m) + 1`` on an ``m x m`` grid.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterable

from .core import (
    Coord, GridShape, Model, Permutation, Rectangle, RectSwap, Schedule,
)
from .route1d import route_swap1d

__all__ = [
    "SparsityProfile", "sparsity_of", "compress", "SparseRound",
    "sparse_rounds", "sparse_route", "round_step_bound",
    "random_sparse_permutation", "transpose_permutation", "transpose_schedule",
]


@dataclass(frozen=True)
class SparsityProfile:
    max_per_column: int
    max_per_row: int


def sparsity_of(sigma: Permutation, shape: GridShape) -> SparsityProfile:
    per_col = [0] * shape.cols
    per_row = [0] * shape.rows
    for p in sigma.moved():
        r, c = shape.coord(p)
        per_col[c] += 1
        per_row[r] += 1
    return SparsityProfile(max(per_col, default=0), max(per_row, default=0))


def _clog2(n: int) -> int:
    return max(0, math.ceil(math.log2(n))) if n > 0 else 0


def round_step_bound(shape: GridShape) -> int:
    return 4 * _clog2(shape.rows) + _clog2(shape.cols) + 1


def compress(
    atoms: Iterable[Coord], m: int, k: int, shape: GridShape, clear: Iterable[int] = ()
) -> tuple[list[RectSwap], list[Coord]]:
    """Fold rows ``k..k+m-1`` until every given atom is in row ``k``.

    Each fold swaps the bottom ``floor(m/2)`` rows of the band with the top
    ``floor(m/2)`` rows, restricted to the columns whose atom is in the bottom
    part; an odd band keeps its middle row in place.  The folds are
    involutions, so replaying the returned steps backwards undoes them.

    Columns in ``clear`` (which must hold none of the atoms) join the first
    fold, pushing whatever sits in row ``k`` there out of that row.
    """
    atoms = [Coord(*a) for a in atoms]
    cols = [c for _, c in atoms]
    if len(set(cols)) != len(cols):
        raise ValueError("atoms must occupy distinct columns")
    if k < 0 or k + m > shape.rows:
        raise ValueError(f"band rows {k}..{k + m - 1} outside the grid")
    for r, c in atoms:
        if not (k <= r < k + m and 0 <= c < shape.cols):
            raise ValueError(f"atom ({r},{c}) outside the band")
    clear = set(clear)
    if clear & set(cols):
        raise ValueError("cleared columns must not hold atoms")
    steps = []
    rows = [r for r, _ in atoms]
    while m > 1:
        h = m // 2
        low = k + m - h
        sel = sorted({c for r, c in zip(rows, cols) if r >= low} | clear)
        clear = set()
        if sel:
            steps.append(RectSwap(
                Rectangle(tuple(range(k, k + h)), tuple(sel)),
                Rectangle(tuple(range(low, k + m)), tuple(sel)),
            ))
            rows = [r - (m - h) if r >= low else r for r in rows]
        m -= h
    return steps, [Coord(r, c) for r, c in zip(rows, cols)]


def _swap_contents(state: list, shape: GridShape, step: RectSwap) -> None:
    for (r1, c1), (r2, c2) in zip(step.r1.points(), step.r2.points()):
        x, y = shape.label(r1, c1), shape.label(r2, c2)
        state[x], state[y] = state[y], state[x]


@dataclass(frozen=True)
class SparseRound:
    pairs: tuple[tuple[int, int], ...]  # (source site, destination site)
    steps: tuple[RectSwap, ...]
    before: Permutation  # remaining permutation at round start
    after: Permutation


def _pick_pairs(dest: list[int], shape: GridShape) -> list[tuple[int, int]]:
    cols = shape.cols
    movers = [p for p, t in enumerate(dest) if t != p]
    black = set(movers)
    pairs = []
    for q in movers:
        t = dest[q]
        if q in black and t in black:
            pairs.append((q, t))
            used = {q % cols, t % cols}
            for x in movers:
                if x % cols in used or dest[x] % cols in used:
                    black.discard(x)
    return pairs


def _row_steps(shape: GridShape, row: int, cols: list[int], rho: Permutation) -> list[RectSwap]:
    """Realize ``rho`` on the sites ``(row, cols[i])`` with single-row swaps."""
    out = []
    for s in route_swap1d(rho).steps:
        out.append(RectSwap(
            Rectangle((row,), tuple(cols[i] for i in s.a)),
            Rectangle((row,), tuple(cols[i] for i in s.b)),
        ))
    return out


def _one_round(dest: list[int], shape: GridShape) -> tuple[list[tuple[int, int]], list[RectSwap]]:
    if shape.rows == 1:
        steps = _row_steps(shape, 0, list(range(shape.cols)), Permutation(tuple(dest)))
        return [(p, t) for p, t in enumerate(dest) if p != t], steps

    pairs = _pick_pairs(dest, shape)
    occ = list(range(shape.size))  # occ[p]: pre-round site of the atom now at p

    src_cols = sorted(q % shape.cols for q, _ in pairs)
    dst_cols = sorted(t % shape.cols for _, t in pairs)
    # targets parked in row 0 of a column the sources never fold
    parked = {t % shape.cols for q, t in pairs if t < shape.cols and (t - q) % shape.cols}
    comp1, _ = compress([shape.coord(q) for q, _ in pairs], shape.rows, 0, shape, clear=parked)
    for s in comp1:
        _swap_contents(occ, shape, s)
    where = {a: p for p, a in enumerate(occ)}
    comp2, _ = compress([shape.coord(where[t]) for _, t in pairs], shape.rows - 1, 1, shape)

    src_rank = {c: i for i, c in enumerate(src_cols)}
    dst_rank = {c: i for i, c in enumerate(dst_cols)}
    rho = [0] * len(pairs)
    for q, t in pairs:
        rho[src_rank[q % shape.cols]] = dst_rank[t % shape.cols]
    align = _row_steps(shape, 0, src_cols, Permutation(tuple(rho)))
    exchange = RectSwap(Rectangle((0,), tuple(src_cols)), Rectangle((1,), tuple(dst_cols)))

    steps = comp1 + comp2 + align + [exchange] + comp2[::-1] + comp1[::-1]
    return pairs, steps


def sparse_rounds(sigma: Permutation, shape: GridShape) -> list[SparseRound]:
    """Run column-sparse routing and keep the per-round record."""
    if sigma.size != shape.size:
        raise ValueError(f"permutation has {sigma.size} sites, grid has {shape.size}")
    dest = list(sigma.map)
    rounds = []
    while any(t != p for p, t in enumerate(dest)):
        before = Permutation(tuple(dest))
        pairs, steps = _one_round(dest, shape)
        for s in steps:
            _swap_contents(dest, shape, s)
        rounds.append(SparseRound(tuple(pairs), tuple(steps), before, Permutation(tuple(dest))))
    return rounds


def sparse_route(sigma: Permutation, shape: GridShape, orientation: str = "columns") -> Schedule:
    """Grid-transfer schedule for a column-sparse (or, transposed, row-sparse) ``sigma``."""
    if orientation == "rows":
        flipped = GridShape(shape.cols, shape.rows)
        inner = sparse_route(transpose_permutation(sigma, shape), flipped)
        return transpose_schedule(inner)
    if orientation != "columns":
        raise ValueError(f"orientation must be 'columns' or 'rows', got {orientation!r}")
    steps = [s for rnd in sparse_rounds(sigma, shape) for s in rnd.steps]
    return Schedule(Model.GRID, shape, tuple(steps))


def transpose_permutation(sigma: Permutation, shape: GridShape) -> Permutation:
    """The same permutation on the transposed grid."""
    flipped = GridShape(shape.cols, shape.rows)
    m = [0] * sigma.size
    for p, t in enumerate(sigma.map):
        (r, c), (tr, tc) = shape.coord(p), shape.coord(t)
        m[flipped.label(c, r)] = flipped.label(tc, tr)
    return Permutation(tuple(m))


def transpose_schedule(schedule: Schedule) -> Schedule:
    """Mirror a grid-transfer schedule across the main diagonal."""
    rows, cols = schedule.shape
    steps = []
    for s in schedule.steps:
        if not isinstance(s, RectSwap):
            raise TypeError("only unmasked rectangle swaps can be transposed")
        steps.append(RectSwap(Rectangle(s.r1.cols, s.r1.rows), Rectangle(s.r2.cols, s.r2.rows)))
    return Schedule(schedule.model, GridShape(cols, rows), tuple(steps))


def random_sparse_permutation(shape: GridShape, per_column: int, seed: int) -> Permutation:
    """Random permutation moving at most ``per_column`` atoms in every column.

    Picks up to ``per_column`` sites per column and permutes them uniformly
    (``random.Random(seed)``); sites outside the pick are fixed.
    """
    rng = random.Random(seed)
    sites = []
    for c in range(shape.cols):
        k = rng.randint(0, min(per_column, shape.rows))
        sites += [shape.label(r, c) for r in rng.sample(range(shape.rows), k)]
    images = sites[:]
    rng.shuffle(images)
    m = list(range(shape.size))
    for s, t in zip(sites, images):
        m[s] = t
    return Permutation(tuple(m))
