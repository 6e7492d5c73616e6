"""JSON text formats for permutations and schedules.

Permutation::

    {"n": 4, "map": [1, 2, 3, 0]}                 # 1D chain
    {"rows": 2, "cols": 2, "map": [3, 2, 1, 0]}    # 2D grid, row-major labels

Schedule::

    {"model": "swap1d", "shape": {"n": 4},
     "steps": [{"kind": "swap1d", "a": [0, 1], "b": [2, 3]}]}

Output is canonical (fixed key order, compact separators, trailing newline)
so that ``dumps(loads(text)) == text`` for anything this module wrote.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .core import (
    GridShape, InOrderSwap1D, MaskedRectSwap, Model, Permutation, Rectangle,
    RectSwap, RiffleShuffle, RoutingStep, Schedule, Shape, shape_size,
)


class FormatError(ValueError):
    pass


def _dump(obj: Any) -> str:
    return json.dumps(obj, separators=(",", ":")) + "\n"


def shape_to_obj(shape: Shape) -> dict:
    if isinstance(shape, GridShape):
        return {"rows": shape.rows, "cols": shape.cols}
    return {"n": int(shape)}


def shape_from_obj(obj: dict) -> Shape:
    try:
        if "n" in obj:
            return int(obj["n"])
        return GridShape(int(obj["rows"]), int(obj["cols"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad shape: {obj!r}") from exc


def dumps_permutation(perm: Permutation, shape: Shape | None = None) -> str:
    shape = perm.size if shape is None else shape
    if shape_size(shape) != perm.size:
        raise FormatError(f"shape {shape} does not hold {perm.size} sites")
    obj = shape_to_obj(shape)
    obj["map"] = list(perm.map)
    return _dump(obj)


def loads_permutation(text: str) -> tuple[Permutation, Shape]:
    try:
        obj = json.loads(text)
        shape = shape_from_obj(obj)
        perm = Permutation(tuple(obj["map"]))
    except FormatError:
        raise
    except (ValueError, KeyError, TypeError) as exc:
        raise FormatError(f"bad permutation: {exc}") from exc
    if shape_size(shape) != perm.size:
        raise FormatError(f"map has {perm.size} entries, shape wants {shape_size(shape)}")
    return perm, shape


def _rect_obj(rect: Rectangle) -> dict:
    return {"rows": list(rect.rows), "cols": list(rect.cols)}


def step_to_obj(step: RoutingStep) -> dict:
    if isinstance(step, RiffleShuffle):
        return {"kind": "riffle", "moved": list(step.moved), "targets": list(step.targets)}
    if isinstance(step, InOrderSwap1D):
        return {"kind": "swap1d", "a": list(step.a), "b": list(step.b)}
    if isinstance(step, MaskedRectSwap):
        return {"kind": "masked", "r1": _rect_obj(step.r1), "r2": _rect_obj(step.r2),
                "mask": [int(m) for m in step.mask]}
    if isinstance(step, RectSwap):
        return {"kind": "rect", "r1": _rect_obj(step.r1), "r2": _rect_obj(step.r2)}
    raise TypeError(f"not a routing step: {step!r}")


def step_from_obj(obj: dict) -> RoutingStep:
    try:
        kind = obj["kind"]
        if kind == "riffle":
            return RiffleShuffle(tuple(obj["moved"]), tuple(obj["targets"]))
        if kind == "swap1d":
            return InOrderSwap1D(tuple(obj["a"]), tuple(obj["b"]))
        r1 = Rectangle(tuple(obj["r1"]["rows"]), tuple(obj["r1"]["cols"]))
        r2 = Rectangle(tuple(obj["r2"]["rows"]), tuple(obj["r2"]["cols"]))
        if kind == "rect":
            return RectSwap(r1, r2)
        if kind == "masked":
            mask = obj["mask"]
            if any(m not in (0, 1) for m in mask):
                raise FormatError("mask entries must be 0 or 1")
            return MaskedRectSwap(r1, r2, tuple(bool(m) for m in mask))
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad step {obj!r}: {exc}") from exc
    raise FormatError(f"unknown step kind {kind!r}")


def dumps_schedule(schedule: Schedule) -> str:
    return _dump({
        "model": schedule.model.value,
        "shape": shape_to_obj(schedule.shape),
        "steps": [step_to_obj(s) for s in schedule.steps],
    })


def loads_schedule(text: str) -> Schedule:
    try:
        obj = json.loads(text)
        model = Model(obj["model"])
        shape = shape_from_obj(obj["shape"])
        steps = tuple(step_from_obj(s) for s in obj["steps"])
    except FormatError:
        raise
    except (ValueError, KeyError, TypeError) as exc:
        raise FormatError(f"bad schedule: {exc}") from exc
    if model.is_2d != isinstance(shape, GridShape):
        raise FormatError(f"model {model.value} does not match shape {obj['shape']}")
    return Schedule(model, shape, steps)


def read_permutation(path: str | Path) -> tuple[Permutation, Shape]:
    return loads_permutation(Path(path).read_text())


def write_permutation(path: str | Path, perm: Permutation, shape: Shape | None = None) -> None:
    Path(path).write_text(dumps_permutation(perm, shape))


def read_schedule(path: str | Path) -> Schedule:
    return loads_schedule(Path(path).read_text())


def write_schedule(path: str | Path, schedule: Schedule) -> None:
    Path(path).write_text(dumps_schedule(schedule))
