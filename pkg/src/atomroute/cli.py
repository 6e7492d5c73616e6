"""``atomroute`` command-line interface.

Exit codes: 0 on success, 1 when a schedule fails verification or audit,
2 on usage errors, unreadable files and shape mismatches.

Random instances in ``bench`` come from :func:`atomroute.core.random_permutation`
(``random.Random(seed)``, explicit Fisher-Yates); sample ``k`` of a run with
``--seed S`` uses seed ``S + k``, so a CSV can be regenerated exactly.
"""

from __future__ import annotations

import argparse
import csv
import math
import statistics
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .bounds import audit_schedule, counting_bound_preset, monotone_lower_bound
from .core import (
    GridShape, InvalidStepError, Model, Permutation, Schedule, Shape,
    apply_schedule, random_permutation, shape_size, validate_schedule,
)
from .formats import FormatError, read_permutation, read_schedule, write_schedule
from .hypercube import (
    dimension_of, embed, hypercube_route, pad_permutation, padded_embedding,
    strip_filler_swaps,
)
from .lowering import lower_schedule
from .oracle import routing_number_table
from .route1d import route_riffle, route_swap1d
from .sparse import round_step_bound, sparse_route, sparsity_of

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

BENCH_COLUMNS = [
    "model", "N", "seed", "steps", "countingBound", "monotoneBound", "verified", "auditPass",
]


class UsageError(Exception):
    """Bad input that maps to exit code 2."""


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _clog2(n: int) -> int:
    return (n - 1).bit_length() if n > 1 else 0


def _shape_text(shape: Shape) -> str:
    return f"{shape.rows}x{shape.cols}" if isinstance(shape, GridShape) else f"N={shape}"


def _require_grid(model: Model, shape: Shape) -> GridShape:
    if not isinstance(shape, GridShape):
        raise UsageError(f"model {model.value} needs a 2D permutation file (rows/cols)")
    return shape


def _grid_ceiling(n: int) -> float:
    return math.sqrt(2 * n) * (2 * math.log2(n) - 1)


# --------------------------------------------------------------------- route

@dataclass
class RouteResult:
    schedule: Schedule
    ceiling: str
    padded: bool = False


def _hypercube_schedule(sigma: Permutation, shape: GridShape, pad: bool) -> tuple[Schedule, bool]:
    n = sigma.size
    exact = n >= 2 and not n & (n - 1) and embed(dimension_of(n)).shape == shape
    if exact:
        return hypercube_route(sigma), False
    if not pad:
        raise UsageError(
            f"grid {shape.rows}x{shape.cols} is not a hypercube grid; rerun with --pad")
    emb = padded_embedding(shape)
    big = emb.shape
    real = {big.label(*shape.coord(p)) for p in range(n)}
    filler = set(range(big.size)) - real
    schedule = hypercube_route(pad_permutation(sigma, shape, emb))
    return strip_filler_swaps(schedule, filler), True


def route(sigma: Permutation, shape: Shape, model: Model, *, via_hypercube: bool = False,
          pad: bool = False, sparse_threshold: int | None = None,
          lowering: str = "lines") -> RouteResult:
    n = sigma.size
    if shape_size(shape) != n:
        raise UsageError("permutation does not fill its shape")
    if not model.is_2d:
        if isinstance(shape, GridShape):
            raise UsageError(f"model {model.value} needs a 1D permutation file (n)")
        if via_hypercube or pad:
            raise UsageError("--via-hypercube and --pad apply to 2D models only")
        router = route_riffle if model is Model.RIFFLE else route_swap1d
        return RouteResult(router(sigma), f"ceil(log2 N) = {_clog2(n)}")

    shape = _require_grid(model, shape)
    if model is Model.GRID and sparse_threshold is not None and not via_hypercube:
        profile = sparsity_of(sigma, shape)
        if profile.max_per_column <= sparse_threshold:
            return RouteResult(sparse_route(sigma, shape, "columns"),
                               f"{round_step_bound(shape)} steps per round")
        if profile.max_per_row <= sparse_threshold:
            flipped = GridShape(shape.cols, shape.rows)
            return RouteResult(sparse_route(sigma, shape, "rows"),
                               f"{round_step_bound(flipped)} steps per round")

    schedule, padded = _hypercube_schedule(sigma, shape, pad)
    size = schedule.size
    d = dimension_of(size)
    if model is Model.SELECTIVE:
        return RouteResult(schedule, f"2d - 1 = {2 * d - 1}", padded)
    lowered = lower_schedule(schedule, lowering)
    return RouteResult(lowered, f"sqrt(2N)(2 log2 N - 1) = {_fmt(_grid_ceiling(size))}", padded)


def cmd_route(args: argparse.Namespace) -> int:
    sigma, shape = read_permutation(args.perm)
    result = route(sigma, shape, Model(args.model), via_hypercube=args.via_hypercube,
                   pad=args.pad, sparse_threshold=args.sparse_threshold,
                   lowering=args.lowering)
    write_schedule(args.out, result.schedule)
    where = f" on padded grid {_shape_text(result.schedule.shape)}" if result.padded else ""
    print(f"steps: {len(result.schedule)}{where}")
    print(f"ceiling: {result.ceiling}")
    return EXIT_OK


# -------------------------------------------------------------------- verify

def _padded_site(shape: Shape, big: Shape, p: int) -> int:
    if isinstance(shape, GridShape):
        return big.label(*shape.coord(p))
    return p


def _fits_inside(shape: Shape, big: Shape) -> bool:
    if isinstance(shape, GridShape) != isinstance(big, GridShape):
        return False
    if isinstance(shape, GridShape):
        return shape.rows <= big.rows and shape.cols <= big.cols
    return shape <= big


def verify(sigma: Permutation, shape: Shape, schedule: Schedule) -> tuple[bool, str]:
    """Check ``schedule`` against ``sigma``; the message names the first problem.

    A schedule on a larger grid is accepted when the permutation's grid sits in
    its top-left corner (padding): real atoms must reach their destinations,
    filler atoms may end on any filler site.
    """
    if schedule.shape != shape and not _fits_inside(shape, schedule.shape):
        raise UsageError(
            f"schedule shape {_shape_text(schedule.shape)} does not match {_shape_text(shape)}")
    check = validate_schedule(schedule)
    if not check:
        return False, check.reason
    result = apply_schedule(schedule)
    big = schedule.shape
    for p, t in enumerate(sigma.map):
        got = result(_padded_site(shape, big, p))
        want = _padded_site(shape, big, t)
        if got != want:
            return False, f"site {p}: atom ends at {got}, expected {want}"
    return True, "ok"


def cmd_verify(args: argparse.Namespace) -> int:
    sigma, shape = read_permutation(args.perm)
    schedule = read_schedule(args.schedule)
    ok, message = verify(sigma, shape, schedule)
    print(message)
    return EXIT_OK if ok else EXIT_FAIL


# --------------------------------------------------------------------- audit

def cmd_audit(args: argparse.Namespace) -> int:
    sigma, shape = read_permutation(args.perm)
    schedule = read_schedule(args.schedule)
    if schedule.shape != shape:
        raise UsageError(
            f"schedule shape {_shape_text(schedule.shape)} does not match {_shape_text(shape)}")
    result = audit_schedule(sigma, schedule)
    if result.trace.values:
        print("trace: " + " ".join(str(v) for v in result.trace.values))
        print("factors: " + " ".join(_fmt(f) for f in result.trace.factors))
    print("PASS" if result.passed else f"FAIL {result.message}")
    return EXIT_OK if result.passed else EXIT_FAIL


# -------------------------------------------------------------------- bounds

def cmd_bounds(args: argparse.Namespace) -> int:
    sigma, shape = read_permutation(args.perm)
    model = Model(args.model)
    if model.is_2d:
        _require_grid(model, shape)
    elif isinstance(shape, GridShape):
        raise UsageError(f"model {model.value} needs a 1D permutation file (n)")
    print(f"counting bound: {_fmt(counting_bound_preset(model, sigma.size))}")
    print(f"monotone bound: {monotone_lower_bound(sigma, model, shape)}")
    return EXIT_OK


# -------------------------------------------------------------------- oracle

def cmd_oracle(args: argparse.Namespace) -> int:
    model = Model(args.model)
    if args.n is not None:
        if model.is_2d:
            raise UsageError(f"model {model.value} needs --rows and --cols")
        shape: Shape = args.n
    else:
        if args.rows is None or args.cols is None:
            raise UsageError("give --n, or both --rows and --cols")
        if not model.is_2d:
            raise UsageError(f"model {model.value} needs --n")
        shape = GridShape(args.rows, args.cols)
    try:
        table = routing_number_table(model, shape)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rows = sorted(table.items(), key=lambda kv: kv[0].map)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["permutation", "distance"])
            for perm, dist in rows:
                writer.writerow([",".join(map(str, perm.map)), dist])
    histogram: dict[int, int] = {}
    for dist in table.values():
        histogram[dist] = histogram.get(dist, 0) + 1
    for dist in sorted(histogram):
        print(f"distance {dist}: {histogram[dist]} permutations")
    print(f"max distance: {max(table.values())}")
    return EXIT_OK


# --------------------------------------------------------------------- bench

def bench_shape(model: Model, n: int) -> Shape:
    if not model.is_2d:
        return n
    try:
        return embed(dimension_of(n)).shape
    except ValueError as exc:
        raise UsageError(f"2D bench sizes must be powers of two: {exc}") from exc


def bench_ceiling(model: Model, n: int) -> float:
    if not model.is_2d:
        return float(_clog2(n))
    d = dimension_of(n)
    return float(2 * d - 1) if model is Model.SELECTIVE else _grid_ceiling(n)


def bench_row(model: Model, n: int, seed: int) -> dict:
    shape = bench_shape(model, n)
    sigma = random_permutation(n, seed)
    schedule = route(sigma, shape, model).schedule
    try:
        verified = apply_schedule(schedule) == sigma
    except InvalidStepError:
        verified = False
    audit = audit_schedule(sigma, schedule)
    return {
        "model": model.value,
        "N": n,
        "seed": seed,
        "steps": len(schedule),
        "countingBound": _fmt(counting_bound_preset(model, n)),
        "monotoneBound": monotone_lower_bound(sigma, model, shape),
        "verified": str(verified).lower(),
        "auditPass": str(audit.passed).lower(),
    }


def _bench_task(task: tuple[str, int, int]) -> dict:
    model, n, seed = task
    return bench_row(Model(model), n, seed)


def run_bench(model: Model, sizes: list[int], samples: int, seed: int, jobs: int = 1) -> list[dict]:
    """Rows ordered by (size, seed) whatever the worker count."""
    for n in sizes:
        bench_shape(model, n)
    tasks = [(model.value, n, seed + k) for n in sizes for k in range(samples)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_bench_task, tasks, chunksize=8))
    return [_bench_task(t) for t in tasks]


def _parse_sizes(text: str) -> list[int]:
    try:
        sizes = [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --sizes {text!r}") from exc
    if not sizes or min(sizes) < 1:
        raise UsageError("--sizes needs positive integers")
    return sizes


def cmd_bench(args: argparse.Namespace) -> int:
    model = Model(args.model)
    sizes = _parse_sizes(args.sizes)
    if args.samples < 1:
        raise UsageError("--samples must be positive")
    rows = run_bench(model, sizes, args.samples, args.seed, args.jobs)
    with open(args.out, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=BENCH_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
    print(f"{'N':>6} {'max':>5} {'mean':>8} {'ceiling':>9} {'counting':>9} {'monotone':>8}")
    ok = True
    for n in sizes:
        group = [r for r in rows if r["N"] == n]
        steps = [r["steps"] for r in group]
        ceiling = bench_ceiling(model, n)
        print(f"{n:>6} {max(steps):>5} {_fmt(statistics.fmean(steps)):>8} {_fmt(ceiling):>9} "
              f"{group[0]['countingBound']:>9} {max(r['monotoneBound'] for r in group):>8}")
        ok = ok and all(r["verified"] == "true" and r["auditPass"] == "true" for r in group)
        ok = ok and max(steps) <= ceiling
    print("all samples verified and audited" if ok else "FAILURES present, see CSV")
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="atomroute", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    models = [m.value for m in Model]

    p = sub.add_parser("route", help="compute a schedule for a permutation")
    p.add_argument("--model", choices=models, required=True)
    p.add_argument("--perm", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--via-hypercube", action="store_true",
                   help="grid model: always use hypercube routing plus lowering")
    p.add_argument("--pad", action="store_true",
                   help="embed a non-hypercube grid in the next hypercube grid")
    p.add_argument("--sparse-threshold", type=int, metavar="C",
                   help="grid model: use sparse routing when at most C atoms move per column (or row)")
    p.add_argument("--lowering", choices=["lines", "greedy"], default="lines")
    p.set_defaults(func=cmd_route)

    p = sub.add_parser("verify", help="check that a schedule realizes a permutation")
    p.add_argument("--perm", required=True)
    p.add_argument("--schedule", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("audit", help="print the monotone trace of a schedule")
    p.add_argument("--perm", required=True)
    p.add_argument("--schedule", required=True)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("bounds", help="lower bounds for a permutation")
    p.add_argument("--perm", required=True)
    p.add_argument("--model", choices=models, required=True)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("oracle", help="exact routing numbers on a tiny shape")
    p.add_argument("--model", choices=models, required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--rows", type=int)
    p.add_argument("--cols", type=int)
    p.add_argument("--csv", help="write the full distance table here")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", help="route seeded random permutations and write a CSV")
    p.add_argument("--model", choices=models, required=True)
    p.add_argument("--sizes", required=True, help="comma-separated site counts")
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, FormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
