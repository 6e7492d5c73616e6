"""Divide-and-conquer routers for a 1D chain.

Both routers split every segment into a left part of ``ceil(n/2)`` sites and
a right part, move every atom to the part holding its destination, and then
recurse on all parts at once.  The per-segment moves of one recursion level
touch disjoint stretches of the chain, so they merge into one step and the
schedule has at most ``ceil(log2 N)`` steps.
"""

from __future__ import annotations

from .core import InOrderSwap1D, Model, Permutation, RiffleShuffle, Schedule

__all__ = ["route_riffle", "route_swap1d", "reversal_thirds_schedule"]


def _halve(segments: list[tuple[int, int]]) -> list[tuple[int, int]]:
    out = []
    for lo, hi in segments:
        if hi - lo >= 2:
            mid = lo + (hi - lo + 1) // 2
            out.append((lo, mid))
            out.append((mid, hi))
    return out


def _route_halving(sigma: Permutation, model: Model) -> Schedule:
    n = sigma.size
    dest = list(sigma.map)  # dest[p]: final site of the atom now at p
    steps = []
    segments = [(0, n)] if n >= 2 else []
    while segments:
        first: list[int] = []  # riffle: moved / swap: a
        second: list[int] = []  # riffle: targets / swap: b
        for lo, hi in segments:
            mid = lo + (hi - lo + 1) // 2
            if model is Model.RIFFLE:
                moved = [p for p in range(lo, hi) if dest[p] >= mid]
                if moved != list(range(mid, hi)):
                    first.extend(moved)
                    second.extend(range(mid, hi))
            else:
                first.extend(p for p in range(lo, mid) if dest[p] >= mid)
                second.extend(p for p in range(mid, hi) if dest[p] < mid)
        if first:
            if model is Model.RIFFLE:
                step = RiffleShuffle(tuple(first), tuple(second))
                stay = sorted(set(range(n)) - set(first))
                free = sorted(set(range(n)) - set(second))
                new = [0] * n
                for src, dst in zip(first, second):
                    new[dst] = dest[src]
                for src, dst in zip(stay, free):
                    new[dst] = dest[src]
                dest = new
            else:
                step = InOrderSwap1D(tuple(first), tuple(second))
                for x, y in zip(first, second):
                    dest[x], dest[y] = dest[y], dest[x]
            steps.append(step)
        segments = _halve(segments)
    return Schedule(model, n, tuple(steps))


def route_riffle(sigma: Permutation) -> Schedule:
    """Route ``sigma`` with riffle shuffles in at most ``ceil(log2 N)`` steps.

    Each level is a stable partition: every atom bound for the right half of
    its segment is lifted and dropped, in order, onto that right half.
    """
    return _route_halving(sigma, Model.RIFFLE)


def route_swap1d(sigma: Permutation) -> Schedule:
    """Route ``sigma`` with in-order swaps in at most ``ceil(log2 N)`` steps.

    Per segment, the left-half atoms bound right are swapped in order with
    the right-half atoms bound left; the two lists always have equal length.
    """
    return _route_halving(sigma, Model.SWAP1D)


def reversal_thirds_schedule(n: int) -> Schedule:
    """Reverse a chain of ``n`` sites in exactly ``ceil(log3 n)`` in-order swaps.

    Every segment swaps its first and last ``ceil(len/3)`` sites, then all
    three parts are reversed recursively in parallel.
    """
    if n < 1:
        raise ValueError("n must be positive")
    steps = []
    segments = [(0, n)]
    while True:
        a: list[int] = []
        b: list[int] = []
        nxt = []
        for lo, hi in segments:
            size = hi - lo
            if size < 2:
                continue
            t = -(-size // 3)
            a.extend(range(lo, lo + t))
            b.extend(range(hi - t, hi))
            nxt += [(lo, lo + t), (lo + t, hi - t), (hi - t, hi)]
        if not a:
            break
        steps.append(InOrderSwap1D(tuple(a), tuple(b)))
        segments = nxt
    return Schedule(Model.SWAP1D, n, tuple(steps))
