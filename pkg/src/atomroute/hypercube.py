"""Hypercube embedding and hypercube routing with selective transfers.

A ``d``-bit address is laid out on a ``2**ceil(d/2) x 2**floor(d/2)`` grid:
the leading ``ceil(d/2)`` bits give the row and the trailing ``floor(d/2)``
bits the column.  With this layout the row-major site label of a cell *is*
its address, so permutations of ``2**d`` sites need no relabelling.

Bits are indexed from the most significant one: bit 0 is the leftmost.
The atoms at two addresses that differ only in bit ``k`` sit at the same
index of two equal-dimension rectangles, so any set of such pairs can be
swapped with a single masked rectangle swap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .core import (
    Coord, GridShape, MaskedRectSwap, Model, Permutation, Rectangle, Schedule,
)

__all__ = [
    "HypercubeEmbedding", "Cut", "embed", "subhypercube_vertices", "cut",
    "cutset_swap", "matching_pairs", "cut_errors", "hypercube_route",
    "dimension_of", "padded_embedding", "pad_permutation", "strip_filler_swaps",
]


@dataclass(frozen=True)
class HypercubeEmbedding:
    d: int

    @property
    def row_bits(self) -> int:
        return (self.d + 1) // 2

    @property
    def col_bits(self) -> int:
        return self.d // 2

    @property
    def shape(self) -> GridShape:
        return GridShape(1 << self.row_bits, 1 << self.col_bits)

    @property
    def size(self) -> int:
        return 1 << self.d

    def coord_of(self, address: int) -> Coord:
        return Coord(address >> self.col_bits, address & ((1 << self.col_bits) - 1))

    def address_of(self, coord: Coord) -> int:
        row, col = coord
        return (row << self.col_bits) | col

    def mask_of(self, bit: int) -> int:
        """Integer mask selecting address bit ``bit`` (0 = most significant)."""
        if not 0 <= bit < self.d:
            raise ValueError(f"bit {bit} outside 0..{self.d - 1}")
        return 1 << (self.d - 1 - bit)

    def cut_rectangles(self, bit: int) -> tuple[Rectangle, Rectangle]:
        """The bit-0 and bit-1 halves of the grid, as combinatorial rectangles."""
        rows, cols = self.shape
        all_rows, all_cols = tuple(range(rows)), tuple(range(cols))
        if bit < self.row_bits:
            m = 1 << (self.row_bits - 1 - bit)
            zero = tuple(r for r in all_rows if not r & m)
            one = tuple(r for r in all_rows if r & m)
            return Rectangle(zero, all_cols), Rectangle(one, all_cols)
        m = self.mask_of(bit)
        zero = tuple(c for c in all_cols if not c & m)
        one = tuple(c for c in all_cols if c & m)
        return Rectangle(all_rows, zero), Rectangle(all_rows, one)


@dataclass(frozen=True)
class Cut:
    bit: int
    v1: frozenset[int]
    v2: frozenset[int]


def embed(d: int) -> HypercubeEmbedding:
    if d < 1:
        raise ValueError(f"hypercube dimension must be >= 1, got {d}")
    return HypercubeEmbedding(d)


def dimension_of(n: int) -> int:
    """``d`` with ``2**d == n``; raises for anything else."""
    if n < 2 or n & (n - 1):
        raise ValueError(f"{n} sites is not a power of two >= 2")
    return n.bit_length() - 1


def _prefix_value(prefix: str) -> int:
    if any(ch not in "01" for ch in prefix):
        raise ValueError(f"prefix must be a bit string, got {prefix!r}")
    return int(prefix, 2) if prefix else 0


def subhypercube_vertices(d: int, prefix: str) -> list[int]:
    """Addresses of ``Q_d`` that start with the bit string ``prefix``."""
    if len(prefix) > d:
        raise ValueError("prefix longer than the address")
    free = d - len(prefix)
    base = _prefix_value(prefix) << free
    return list(range(base, base + (1 << free)))


def cut(d: int, bit: int) -> Cut:
    m = embed(d).mask_of(bit)
    v1 = frozenset(v for v in range(1 << d) if not v & m)
    v2 = frozenset(v for v in range(1 << d) if v & m)
    return Cut(bit, v1, v2)


def cutset_swap(
    embedding: HypercubeEmbedding, bit: int, pairs: Iterable[tuple[int, int]]
) -> MaskedRectSwap:
    """One masked swap exchanging every given pair across cut ``bit``."""
    m = embedding.mask_of(bit)
    r1, _ = embedding.cut_rectangles(bit)
    index = {embedding.address_of(p): i for i, p in enumerate(r1.points())}
    mask = [False] * len(r1)
    used: set[int] = set()
    for x, y in pairs:
        if x ^ y != m:
            raise ValueError(f"pair ({x}, {y}) does not differ exactly at bit {bit}")
        if x in used or y in used:
            raise ValueError(f"pairs are not disjoint at ({x}, {y})")
        used.update((x, y))
        mask[index[min(x, y)]] = True
    r1, r2 = embedding.cut_rectangles(bit)
    return MaskedRectSwap(r1, r2, tuple(mask))


def matching_pairs(d: int, prefix: str, dest: list[int]) -> list[tuple[int, int]]:
    """Cut-edge swaps that balance destination suffixes across the cut of ``prefix``.

    ``dest[p]`` is the target address of the atom now at ``p``; only the bits
    after the cut bit are read.  Atoms with equal suffixes come in pairs and
    the swaps leave one of each pair on either side.

    Every vertex has one cut edge and one "same suffix" edge, so the graph is
    a union of even cycles.  Going round a cycle, the chosen/unchosen state of
    consecutive cut edges must flip exactly at same-suffix edges whose ends
    lie on one side (the errors).  Error-free cycles get no swaps; otherwise
    the solution that swaps the cut edge at the cycle's smallest address wins.
    """
    level = len(prefix)
    free = d - level
    if free < 1:
        return []
    base = _prefix_value(prefix) << free
    half = 1 << (free - 1)
    suffix_mask = half - 1
    verts = range(base, base + 2 * half)

    partner: dict[int, int] = {}
    by_suffix: dict[int, int] = {}
    for p in verts:
        s = dest[p] & suffix_mask
        if s in by_suffix:
            q = by_suffix.pop(s)
            partner[p], partner[q] = q, p
        else:
            by_suffix[s] = p
    if by_suffix:
        raise ValueError(f"destinations in subhypercube {prefix!r} are not a permutation of it")

    def side(p: int) -> bool:
        return bool(p & half)

    pairs = []
    seen: set[int] = set()
    for start in verts:
        if start in seen:
            continue
        # walk: start -cut-> p1 -suffix-> p2 -cut-> ... back to start
        cycle_edges = []  # (low end of cut edge, flips-after)
        p = start
        while True:
            q = p ^ half
            seen.update((p, q))
            r = partner[q]
            cycle_edges.append((min(p, q), side(q) == side(r)))
            p = r
            if p == start:
                break
        if not any(flip for _, flip in cycle_edges):
            continue
        state = True  # the first cut edge touches the smallest address
        for low, flip in cycle_edges:
            if state:
                pairs.append((low, low | half))
            if flip:
                state = not state
    return sorted(pairs)


def _check_subcube(d: int, prefix: str, remaining: Permutation) -> None:
    if remaining.size != 1 << d:
        raise ValueError(f"permutation has {remaining.size} sites, Q_{d} has {1 << d}")
    free = d - len(prefix)
    base = _prefix_value(prefix)
    for p in subhypercube_vertices(d, prefix):
        if remaining.map[p] >> free != base:
            raise ValueError(f"site {p} is sent outside subhypercube {prefix!r}")


def cut_errors(prefix: str, d: int, remaining: Permutation) -> list[MaskedRectSwap]:
    """Matching-step fragment for the subhypercube ``prefix`` (empty or one step)."""
    _check_subcube(d, prefix, remaining)
    if len(prefix) >= d - 1:
        return []
    pairs = matching_pairs(d, prefix, list(remaining.map))
    if not pairs:
        return []
    return [cutset_swap(embed(d), len(prefix), pairs)]


def _swap_all(dest: list[int], pairs: list[tuple[int, int]]) -> None:
    for x, y in pairs:
        dest[x], dest[y] = dest[y], dest[x]


def hypercube_route(sigma: Permutation) -> Schedule:
    """Route ``sigma`` on ``2**d`` sites in at most ``2d - 1`` selective steps.

    Level ``l`` works on all subhypercubes with an ``l``-bit prefix at once.
    Going down, each level emits one step of balancing swaps across bit
    ``l``; the last bit is fixed directly; coming back up, each level emits
    one step of corrections across bit ``l``.  Below level ``l`` an atom at
    ``p`` aims at ``p``'s leading ``l`` bits followed by the rest of its
    destination, which is a permutation of each subhypercube by construction.
    """
    d = dimension_of(sigma.size)
    emb = embed(d)
    n = sigma.size
    dest = list(sigma.map)
    steps = []

    def emit(bit: int, pairs: list[tuple[int, int]]) -> None:
        if pairs:
            steps.append(cutset_swap(emb, bit, pairs))
            _swap_all(dest, pairs)

    for level in range(d - 1):
        pairs = []
        for sub in range(1 << level):
            prefix = format(sub, f"0{level}b") if level else ""
            pairs += matching_pairs(d, prefix, dest)
        emit(level, pairs)

    for level in range(d - 1, -1, -1):
        m = emb.mask_of(level)
        emit(level, [(p, p | m) for p in range(n) if not p & m and dest[p] & m])

    assert dest == list(range(n)), "hypercube routing left atoms out of place"
    return Schedule(Model.SELECTIVE, emb.shape, tuple(steps))


def padded_embedding(shape: GridShape) -> HypercubeEmbedding:
    """Smallest hypercube grid with at least ``shape.rows`` rows and ``shape.cols`` columns."""
    d = 1
    while True:
        emb = HypercubeEmbedding(d)
        if emb.shape.rows >= shape.rows and emb.shape.cols >= shape.cols:
            return emb
        d += 1


def pad_permutation(sigma: Permutation, shape: GridShape, emb: HypercubeEmbedding) -> Permutation:
    """Place ``sigma`` in the top-left corner of ``emb``'s grid; filler sites stay fixed."""
    big = emb.shape
    if big.rows < shape.rows or big.cols < shape.cols:
        raise ValueError(f"grid {shape.rows}x{shape.cols} does not fit in {big.rows}x{big.cols}")
    m = list(range(big.size))
    for p, t in enumerate(sigma.map):
        m[big.label(*shape.coord(p))] = big.label(*shape.coord(t))
    return Permutation(tuple(m))


def strip_filler_swaps(schedule: Schedule, filler: set[int]) -> Schedule:
    """Drop every exchange between two filler atoms.

    ``filler`` holds the starting sites of the filler atoms.  Such exchanges
    never move a real atom, so real atoms end where they did before; filler
    atoms may end on each other's sites.  Steps left with an empty mask go.
    """
    occupant = list(range(schedule.size))  # occupant[p]: start site of the atom at p
    shape = schedule.shape
    steps = []
    for step in schedule.steps:
        mask = list(getattr(step, "mask", [True] * len(step.r1)))
        for i, (a, b) in enumerate(zip(step.r1.points(), step.r2.points())):
            x, y = shape.label(*a), shape.label(*b)
            if mask[i] and occupant[x] in filler and occupant[y] in filler:
                mask[i] = False
            if mask[i]:
                occupant[x], occupant[y] = occupant[y], occupant[x]
        if any(mask):
            steps.append(MaskedRectSwap(step.r1, step.r2, tuple(mask)))
    return Schedule(schedule.model, shape, tuple(steps))
