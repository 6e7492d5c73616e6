"""Exact routing numbers on tiny instances by breadth-first search.

Every legal step of a model is enumerated, steps that induce the same
permutation are merged, and a BFS from the identity then gives the minimum
step count of every permutation.  Only a handful of sites is feasible: the
step sets grow like ``C(2N, N)`` and the state space like ``N!``.
"""

from __future__ import annotations

from collections import deque
from functools import lru_cache
from itertools import combinations, product

from .core import (
    GridShape, InOrderSwap1D, MaskedRectSwap, Model, Permutation, Rectangle,
    RectSwap, RiffleShuffle, RoutingStep, Shape, _step_map, shape_size,
    validate_step,
)

__all__ = ["MAX_SITES", "enumerate_steps", "routing_number_table", "exact_routing_number"]

MAX_SITES = 6


def _guard(model: Model, shape: Shape) -> None:
    if model.is_2d != isinstance(shape, GridShape):
        raise ValueError(f"model {model.value} does not fit shape {shape!r}")
    n = shape_size(shape)
    if n < 1:
        raise ValueError("shape must have at least one site")
    if n > MAX_SITES:
        raise ValueError(f"{n} sites is above the oracle limit of {MAX_SITES}")


def _subsets(n: int, k: int):
    return combinations(range(n), k)


def _candidates_1d(model: Model, n: int):
    for k in range(1, n + 1):
        for first in _subsets(n, k):
            if model is Model.RIFFLE:
                for second in _subsets(n, k):
                    yield RiffleShuffle(first, second)
            else:
                rest = [i for i in range(n) if i not in first]
                for second in combinations(rest, k):
                    yield InOrderSwap1D(first, second)


def _rectangles(shape: GridShape) -> list[Rectangle]:
    rows = [s for k in range(1, shape.rows + 1) for s in _subsets(shape.rows, k)]
    cols = [s for k in range(1, shape.cols + 1) for s in _subsets(shape.cols, k)]
    return [Rectangle(r, c) for r in rows for c in cols]


def _candidates_2d(model: Model, shape: GridShape):
    rects = _rectangles(shape)
    for r1, r2 in product(rects, repeat=2):
        if r1.dim != r2.dim or set(r1.points()) & set(r2.points()):
            continue
        if model is Model.GRID:
            yield RectSwap(r1, r2)
        else:
            for mask in product((False, True), repeat=len(r1)):
                if any(mask):
                    yield MaskedRectSwap(r1, r2, mask)


def enumerate_steps(model: Model | str, shape: Shape) -> list[RoutingStep]:
    """One legal step per distinct non-identity induced permutation."""
    model = Model(model)
    _guard(model, shape)
    if model.is_2d:
        candidates = _candidates_2d(model, shape)
    else:
        candidates = _candidates_1d(model, shape)
    seen: set[tuple[int, ...]] = set()
    out = []
    identity_map = tuple(range(shape_size(shape)))
    for step in candidates:
        if not validate_step(model, shape, step):
            continue
        key = tuple(_step_map(shape, step))
        if key == identity_map or key in seen:
            continue
        seen.add(key)
        out.append(step)
    return out


@lru_cache(maxsize=None)
def _table(model: Model, shape: Shape) -> dict[tuple[int, ...], int]:
    n = shape_size(shape)
    gens = [tuple(_step_map(shape, s)) for s in enumerate_steps(model, shape)]
    start = tuple(range(n))
    dist = {start: 0}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        d = dist[cur] + 1
        for g in gens:
            # one more step applied after ``cur``: g ∘ cur
            nxt = tuple(g[x] for x in cur)
            if nxt not in dist:
                dist[nxt] = d
                queue.append(nxt)
    return dist


def routing_number_table(model: Model | str, shape: Shape) -> dict[Permutation, int]:
    """Minimum step count of every permutation reachable from the identity."""
    model = Model(model)
    _guard(model, shape)
    return {Permutation(k): v for k, v in _table(model, shape).items()}


def exact_routing_number(model: Model | str, shape: Shape, sigma: Permutation) -> int:
    model = Model(model)
    _guard(model, shape)
    if sigma.size != shape_size(shape):
        raise ValueError(f"permutation has {sigma.size} sites, shape has {shape_size(shape)}")
    table = _table(model, shape)
    try:
        return table[sigma.map]
    except KeyError:
        raise ValueError("permutation is not reachable with this model") from None
