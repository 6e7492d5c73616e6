"""Lower bounds on routing numbers and the monotone-decrease auditor.

The 1D reversal set of ``sigma`` is a largest set of sites whose images come
out in reversed order.  One riffle shuffle can shrink it by at most half, and
one in-order swap (or one masked rectangle swap, for the 2D column version)
by at most two thirds.  ``audit_schedule`` replays a schedule and checks this
step by step; ``monotone_lower_bound`` turns it into a step count.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from typing import Sequence

from .core import (
    GridShape, Model, Permutation, Schedule, Shape, _step_map, apply_schedule,
    validate_schedule,
)

__all__ = [
    "reversal_set", "reversal_size", "reversal2d_set", "reversal2d_size",
    "MonotoneTrace", "AuditResult", "BoundReport", "audit_schedule",
    "monotone_lower_bound", "counting_lower_bound", "counting_bound_preset",
    "bound_report", "DECREASE_FACTOR",
]

# The monotone may shrink by at most this factor per step.
DECREASE_FACTOR = {Model.RIFFLE: 2, Model.SWAP1D: 3, Model.GRID: 3, Model.SELECTIVE: 3}


def _lds_from(values: Sequence[int]) -> list[int]:
    """``out[i]`` = length of the longest strictly decreasing run starting at ``i``."""
    # going right to left, a decreasing run from i is an increasing run into i
    tails: list[int] = []
    out = [0] * len(values)
    for i in range(len(values) - 1, -1, -1):
        v = values[i]
        k = bisect_left(tails, v)
        if k == len(tails):
            tails.append(v)
        else:
            tails[k] = v
        out[i] = k + 1
    return out


def _lds_length(values: Sequence[int]) -> int:
    tails: list[int] = []
    for v in reversed(values):
        k = bisect_left(tails, v)
        if k == len(tails):
            tails.append(v)
        else:
            tails[k] = v
    return len(tails)


def reversal_size(sigma: Permutation) -> int:
    return _lds_length(sigma.map)


def reversal_set(sigma: Permutation) -> list[int]:
    """Lexicographically first largest ``x`` with ``i < j  =>  sigma(i) > sigma(j)``."""
    vals = sigma.map
    if not vals:
        return []
    run = _lds_from(vals)
    need = max(run)
    out = []
    last = None
    for i, v in enumerate(vals):
        if run[i] == need and (last is None or v < last):
            out.append(i)
            last = v
            need -= 1
            if need == 0:
                break
    return out


def _column_sequence(sigma: Permutation, shape: GridShape) -> tuple[list[int], list[int]]:
    """Image columns listed column by column, ascending inside each column.

    Ascending order inside a column stops a strictly decreasing run from
    using two atoms of one column, so the 2D monotone becomes a 1D one.
    """
    cols = shape.cols
    buckets: list[list[tuple[int, int]]] = [[] for _ in range(cols)]
    for p, t in enumerate(sigma.map):
        buckets[p % cols].append((t % cols, p))
    values, sites = [], []
    for bucket in buckets:
        bucket.sort()
        for v, p in bucket:
            values.append(v)
            sites.append(p)
    return values, sites


def reversal2d_size(sigma: Permutation, shape: GridShape) -> int:
    values, _ = _column_sequence(sigma, shape)
    return _lds_length(values)


def reversal2d_set(sigma: Permutation, shape: GridShape) -> list[tuple[int, int]]:
    """Largest set of sites in distinct columns whose image columns come out reversed.

    Ties go to the lexicographically first ``(column, row)`` sequence.
    """
    if sigma.size != shape.size:
        raise ValueError("permutation does not fit the grid")
    values, sites = _column_sequence(sigma, shape)
    if not values:
        return []
    run = _lds_from(values)
    need = max(run)
    chosen: list[tuple[int, int]] = []
    last_val, last_col = None, -1
    while need:
        best = None
        for v, p, r in zip(values, sites, run):
            r_, c_ = shape.coord(p)
            if r != need or c_ <= last_col or (last_val is not None and v >= last_val):
                continue
            if best is None or (c_, r_) < best[0]:
                best = ((c_, r_), v)
        (c_, r_), v = best
        chosen.append((r_, c_))
        last_val, last_col = v, c_
        need -= 1
    return chosen


def _monotone(model: Model, shape: Shape, perm: Permutation) -> int:
    if model.is_2d:
        return reversal2d_size(perm, shape)
    return reversal_size(perm)


@dataclass(frozen=True)
class MonotoneTrace:
    values: tuple[int, ...]

    @property
    def factors(self) -> tuple[float, ...]:
        return tuple(b / a for a, b in zip(self.values, self.values[1:]))


@dataclass(frozen=True)
class AuditResult:
    trace: MonotoneTrace
    passed: bool
    message: str = ""

    def __bool__(self) -> bool:
        return self.passed


def audit_schedule(sigma: Permutation, schedule: Schedule) -> AuditResult:
    """Replay ``schedule`` and check the monotone never drops too fast.

    With ``tau_1 = sigma`` and ``tau_{i+1} = tau_i ∘ step_i^{-1}`` (what is
    left to do after ``i`` steps), the model's monotone must satisfy
    ``c * |R(tau_{i+1})| >= |R(tau_i)|`` with ``c`` from
    :data:`DECREASE_FACTOR`.  A violation means a step was not what it
    claims to be.
    """
    check = validate_schedule(schedule)
    if not check:
        return AuditResult(MonotoneTrace(()), False, check.reason)
    if apply_schedule(schedule) != sigma:
        return AuditResult(MonotoneTrace(()), False, "schedule does not realize the permutation")
    model, shape = schedule.model, schedule.shape
    factor = DECREASE_FACTOR[model]
    tau = list(sigma.map)
    values = [_monotone(model, shape, sigma)]
    message = ""
    for i, step in enumerate(schedule.steps):
        s = _step_map(shape, step)
        nxt = [0] * len(tau)
        for p, t in enumerate(tau):
            nxt[s[p]] = t
        tau = nxt
        values.append(_monotone(model, shape, Permutation(tuple(tau))))
        if not message and factor * values[-1] < values[-2]:
            message = f"step {i}: monotone fell from {values[-2]} to {values[-1]}"
    return AuditResult(MonotoneTrace(tuple(values)), not message, message)


def _ceil_log(value: int, base: int) -> int:
    k, power = 0, 1
    while power < value:
        power *= base
        k += 1
    return k


def monotone_lower_bound(sigma: Permutation, model: Model | str, shape: Shape | None = None) -> int:
    """``ceil(log_c |R(sigma)|)`` with ``c`` = 2 for riffles, 3 otherwise."""
    model = Model(model)
    if model.is_2d:
        if not isinstance(shape, GridShape):
            raise ValueError("2D models need a grid shape")
        size = reversal2d_size(sigma, shape)
    else:
        size = reversal_size(sigma)
    return _ceil_log(size, DECREASE_FACTOR[model])


def counting_lower_bound(n: int, log_k: float) -> float:
    """Pigeonhole bound ``N ln(N/e) / ln k - 1``, clamped at zero (natural logs)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if log_k <= 0:
        raise ValueError("log_k must be positive")
    return max(0.0, n * math.log(n / math.e) / log_k - 1)


def counting_bound_preset(model: Model | str, n: int) -> float:
    """Counting bound with the per-model step-count estimate.

    Riffle, 1D swap and selective steps number at most ``(2e)^(2N)``;
    grid-transfer steps at most ``(2e)^(4 sqrt N)``.
    """
    model = Model(model)
    if model is Model.GRID:
        log_k = 4 * math.sqrt(n) * (1 + math.log(2))
    else:
        log_k = 2 * n * (1 + math.log(2))
    return counting_lower_bound(n, log_k)


@dataclass(frozen=True)
class BoundReport:
    model: Model
    counting_bound: float
    monotone_bound: int
    schedule_length: int | None = None


def bound_report(sigma: Permutation, model: Model | str, shape: Shape,
                 schedule: Schedule | None = None) -> BoundReport:
    model = Model(model)
    return BoundReport(
        model,
        counting_bound_preset(model, sigma.size),
        monotone_lower_bound(sigma, model, shape),
        None if schedule is None else len(schedule),
    )
