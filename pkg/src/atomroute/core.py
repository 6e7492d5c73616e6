"""Permutations, step models and the step simulator.

Sites of a 1D chain are labelled ``0..N-1``.  Sites of an ``rows x cols`` grid
are flattened row-major, so a single :class:`Permutation` type serves both
geometries.  A permutation ``p`` sends the atom sitting at site ``i`` to site
``p.map[i]``.

Composition is ``compose(g, f)(i) == g(f(i))``: ``f`` happens first.  A
schedule ``[s1, s2, ..., sl]`` therefore realizes ``sl ∘ ... ∘ s2 ∘ s1``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Sequence, Union

__all__ = [
    "Coord", "GridShape", "Shape", "shape_size", "Permutation", "identity",
    "reversal", "compose", "invert", "random_permutation", "Rectangle",
    "RiffleShuffle", "InOrderSwap1D", "RectSwap", "MaskedRectSwap",
    "RoutingStep", "Model", "Schedule", "StepCheck", "InvalidStepError",
    "validate_step", "step_to_permutation", "apply_schedule",
    "validate_schedule", "random_step",
]


class Coord(NamedTuple):
    row: int
    col: int


class GridShape(NamedTuple):
    rows: int
    cols: int

    @property
    def size(self) -> int:
        return self.rows * self.cols

    def label(self, row: int, col: int) -> int:
        return row * self.cols + col

    def coord(self, label: int) -> Coord:
        return Coord(*divmod(label, self.cols))


# A 1D chain is described by its length alone.
Shape = Union[int, GridShape]


def shape_size(shape: Shape) -> int:
    if isinstance(shape, GridShape):
        return shape.size
    return int(shape)


@dataclass(frozen=True)
class Permutation:
    """A bijection on ``{0, ..., N-1}`` in one-line notation."""

    map: tuple[int, ...]

    def __post_init__(self):
        m = tuple(int(v) for v in self.map)
        object.__setattr__(self, "map", m)
        seen = [False] * len(m)
        for v in m:
            if not 0 <= v < len(m) or seen[v]:
                raise ValueError(f"not a permutation of range({len(m)}): {list(m)}")
            seen[v] = True

    @property
    def size(self) -> int:
        return len(self.map)

    def __len__(self) -> int:
        return len(self.map)

    def __call__(self, i: int) -> int:
        return self.map[i]

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.map))

    def moved(self) -> list[int]:
        """Sites whose atom does not stay put."""
        return [i for i, v in enumerate(self.map) if v != i]


def identity(n: int) -> Permutation:
    return Permutation(tuple(range(n)))


def reversal(n: int) -> Permutation:
    return Permutation(tuple(n - 1 - i for i in range(n)))


def compose(g: Permutation, f: Permutation) -> Permutation:
    """Return ``g ∘ f`` (apply ``f`` first, then ``g``)."""
    if g.size != f.size:
        raise ValueError(f"size mismatch: {g.size} vs {f.size}")
    gm = g.map
    return Permutation(tuple(gm[x] for x in f.map))


def invert(p: Permutation) -> Permutation:
    inv = [0] * p.size
    for i, v in enumerate(p.map):
        inv[v] = i
    return Permutation(tuple(inv))


def random_permutation(n: int, seed: int) -> Permutation:
    """Uniform permutation from a Fisher-Yates shuffle driven by ``random.Random(seed)``.

    The generator is CPython's MT19937; ``randrange`` draws are the only
    randomness consumed, so the output is reproducible across platforms.
    """
    rng = random.Random(seed)
    m = list(range(n))
    for i in range(n - 1, 0, -1):
        j = rng.randrange(i + 1)
        m[i], m[j] = m[j], m[i]
    return Permutation(tuple(m))


@dataclass(frozen=True)
class Rectangle:
    """Combinatorial rectangle ``rows x cols``, ordered row-major."""

    rows: tuple[int, ...]
    cols: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(int(r) for r in self.rows))
        object.__setattr__(self, "cols", tuple(int(c) for c in self.cols))

    @property
    def dim(self) -> tuple[int, int]:
        return (len(self.rows), len(self.cols))

    def __len__(self) -> int:
        return len(self.rows) * len(self.cols)

    def point(self, i: int) -> Coord:
        """The ``i``-th point in lexicographic order."""
        r, c = divmod(i, len(self.cols))
        return Coord(self.rows[r], self.cols[c])

    def points(self) -> list[Coord]:
        return [Coord(r, c) for r in self.rows for c in self.cols]


@dataclass(frozen=True)
class RiffleShuffle:
    """Pick up the atoms at ``moved`` and drop them, in order, at ``targets``.

    The remaining atoms keep their relative order and fill the remaining
    sites, which pins down the complement map uniquely.
    """

    moved: tuple[int, ...]
    targets: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "moved", tuple(int(v) for v in self.moved))
        object.__setattr__(self, "targets", tuple(int(v) for v in self.targets))


@dataclass(frozen=True)
class InOrderSwap1D:
    a: tuple[int, ...]
    b: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(v) for v in self.a))
        object.__setattr__(self, "b", tuple(int(v) for v in self.b))


@dataclass(frozen=True)
class RectSwap:
    r1: Rectangle
    r2: Rectangle


@dataclass(frozen=True)
class MaskedRectSwap:
    r1: Rectangle
    r2: Rectangle
    mask: tuple[bool, ...]

    def __post_init__(self):
        object.__setattr__(self, "mask", tuple(bool(v) for v in self.mask))


RoutingStep = Union[RiffleShuffle, InOrderSwap1D, RectSwap, MaskedRectSwap]


class Model(str, Enum):
    RIFFLE = "riffle"
    SWAP1D = "swap1d"
    GRID = "grid"
    SELECTIVE = "selective"

    @property
    def is_2d(self) -> bool:
        return self in (Model.GRID, Model.SELECTIVE)


_ALLOWED = {
    Model.RIFFLE: (RiffleShuffle,),
    Model.SWAP1D: (InOrderSwap1D,),
    Model.GRID: (RectSwap,),
    Model.SELECTIVE: (RectSwap, MaskedRectSwap),
}


@dataclass(frozen=True)
class Schedule:
    model: Model
    shape: Shape
    steps: tuple[RoutingStep, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "model", Model(self.model))
        object.__setattr__(self, "steps", tuple(self.steps))

    @property
    def size(self) -> int:
        return shape_size(self.shape)

    def __len__(self) -> int:
        return len(self.steps)


class StepCheck(NamedTuple):
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


class InvalidStepError(ValueError):
    def __init__(self, reason: str, index: int | None = None):
        self.reason = reason
        self.index = index
        super().__init__(reason if index is None else f"step {index}: {reason}")


def _ascending(seq: Sequence[int]) -> bool:
    return all(x < y for x, y in zip(seq, seq[1:]))


def _in_range(seq: Sequence[int], n: int) -> bool:
    return all(0 <= v < n for v in seq)


def _check_rect(rect: Rectangle, shape: GridShape, name: str) -> str:
    if not rect.rows or not rect.cols:
        return f"{name} empty"
    if not _ascending(rect.rows):
        return f"{name} rows not ascending"
    if not _ascending(rect.cols):
        return f"{name} cols not ascending"
    if not _in_range(rect.rows, shape.rows):
        return f"{name} rows out of range"
    if not _in_range(rect.cols, shape.cols):
        return f"{name} cols out of range"
    return ""


def _check_1d(step, n: int) -> str:
    if isinstance(step, RiffleShuffle):
        A, P = step.moved, step.targets
        if len(A) != len(P):
            return "moved and targets differ in length"
        if not _ascending(A):
            return "moved not ascending"
        if not _ascending(P):
            return "targets not ascending"
        if not _in_range(A, n) or not _in_range(P, n):
            return "site out of range"
        return ""
    a, b = step.a, step.b
    if len(a) != len(b):
        return "a and b differ in length"
    if not _ascending(a):
        return "a not ascending"
    if not _ascending(b):
        return "b not ascending"
    if not _in_range(a, n) or not _in_range(b, n):
        return "site out of range"
    common = set(a) & set(b)
    if common:
        return f"a and b overlap at {min(common)}"
    return ""


def _check_2d(step, shape: GridShape) -> str:
    for rect, name in ((step.r1, "r1"), (step.r2, "r2")):
        msg = _check_rect(rect, shape, name)
        if msg:
            return msg
    if step.r1.dim != step.r2.dim:
        return f"dimension mismatch {step.r1.dim} vs {step.r2.dim}"
    if isinstance(step, MaskedRectSwap):
        if len(step.mask) != len(step.r1):
            return f"mask length {len(step.mask)} != {len(step.r1)}"
        p1 = {step.r1.point(i) for i, m in enumerate(step.mask) if m}
        p2 = {step.r2.point(i) for i, m in enumerate(step.mask) if m}
    else:
        p1, p2 = set(step.r1.points()), set(step.r2.points())
    common = p1 & p2
    if common:
        r, c = min(common)
        return f"rectangles overlap at ({r},{c})"
    return ""


def validate_step(model: Model | str, shape: Shape, step: RoutingStep) -> StepCheck:
    """Check ``step`` against the rules of ``model`` on ``shape``.

    Returns a falsy :class:`StepCheck` whose ``reason`` names the first
    violated constraint.
    """
    model = Model(model)
    if not isinstance(step, _ALLOWED[model]):
        return StepCheck(False, f"{type(step).__name__} not allowed in model {model.value}")
    if model.is_2d:
        if not isinstance(shape, GridShape):
            return StepCheck(False, "2D model needs a grid shape")
        msg = _check_2d(step, shape)
    else:
        if isinstance(shape, GridShape):
            return StepCheck(False, "1D model needs a chain length")
        msg = _check_1d(step, int(shape))
    return StepCheck(not msg, msg)


def _model_for(step: RoutingStep) -> Model:
    if isinstance(step, RiffleShuffle):
        return Model.RIFFLE
    if isinstance(step, InOrderSwap1D):
        return Model.SWAP1D
    if isinstance(step, RectSwap):
        return Model.GRID
    return Model.SELECTIVE


def _step_map(shape: Shape, step: RoutingStep) -> list[int]:
    n = shape_size(shape)
    m = list(range(n))
    if isinstance(step, RiffleShuffle):
        moved = set(step.moved)
        for src, dst in zip(step.moved, step.targets):
            m[src] = dst
        taken = set(step.targets)
        free = (t for t in range(n) if t not in taken)
        for src in range(n):
            if src not in moved:
                m[src] = next(free)
    elif isinstance(step, InOrderSwap1D):
        for x, y in zip(step.a, step.b):
            m[x], m[y] = y, x
    else:
        label = shape.label
        mask = getattr(step, "mask", None)
        ncols = len(step.r1.cols)
        for i in range(len(step.r1)):
            if mask is not None and not mask[i]:
                continue
            r, c = divmod(i, ncols)
            x = label(step.r1.rows[r], step.r1.cols[c])
            y = label(step.r2.rows[r], step.r2.cols[c])
            m[x], m[y] = y, x
    return m


def step_to_permutation(shape: Shape, step: RoutingStep) -> Permutation:
    """The site permutation induced by a single legal step."""
    check = validate_step(_model_for(step), shape, step)
    if not check:
        raise InvalidStepError(check.reason)
    return Permutation(tuple(_step_map(shape, step)))


def validate_schedule(schedule: Schedule) -> StepCheck:
    for i, step in enumerate(schedule.steps):
        check = validate_step(schedule.model, schedule.shape, step)
        if not check:
            return StepCheck(False, f"step {i}: {check.reason}")
    return StepCheck(True)


def apply_schedule(schedule: Schedule) -> Permutation:
    """Compose the steps left to right into ``sl ∘ ... ∘ s1``."""
    current = list(range(schedule.size))
    for i, step in enumerate(schedule.steps):
        check = validate_step(schedule.model, schedule.shape, step)
        if not check:
            raise InvalidStepError(check.reason, i)
        s = _step_map(schedule.shape, step)
        current = [s[x] for x in current]
    return Permutation(tuple(current))


def _random_subset(rng: random.Random, pool: Sequence[int], k: int) -> tuple[int, ...]:
    return tuple(sorted(rng.sample(list(pool), k)))


def random_step(model: Model | str, shape: Shape, rng: random.Random) -> RoutingStep:
    """Draw a random legal step for ``model``; used to fuzz the auditors."""
    model = Model(model)
    if model is Model.RIFFLE:
        n = int(shape)
        k = rng.randint(0, n)
        return RiffleShuffle(_random_subset(rng, range(n), k), _random_subset(rng, range(n), k))
    if model is Model.SWAP1D:
        n = int(shape)
        k = rng.randint(0, n // 2)
        sites = rng.sample(range(n), 2 * k)
        return InOrderSwap1D(tuple(sorted(sites[:k])), tuple(sorted(sites[k:])))
    rows, cols = shape
    if rows * cols < 2:
        raise ValueError("a 2D step needs at least two sites")
    while True:
        h = rng.randint(1, rows)
        w = rng.randint(1, cols)
        r1 = Rectangle(_random_subset(rng, range(rows), h), _random_subset(rng, range(cols), w))
        r2 = Rectangle(_random_subset(rng, range(rows), h), _random_subset(rng, range(cols), w))
        if set(r1.rows) & set(r2.rows) and set(r1.cols) & set(r2.cols):
            continue
        if model is Model.GRID or rng.random() < 0.2:
            return RectSwap(r1, r2)
        return MaskedRectSwap(r1, r2, tuple(rng.random() < 0.5 for _ in range(len(r1))))
