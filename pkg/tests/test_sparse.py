import pytest

from atomroute.core import (
    Coord, GridShape, Model, Permutation, Schedule, apply_schedule, identity,
    random_permutation,
)
from atomroute.sparse import (
    compress, random_sparse_permutation, round_step_bound, sparse_rounds,
    sparse_route, sparsity_of, transpose_permutation, transpose_schedule,
)


def test_compress_gathers_and_unfolds():
    shape = GridShape(8, 4)
    atoms = [Coord(7, 0), Coord(3, 1), Coord(0, 2), Coord(5, 3)]
    steps, final = compress(atoms, 8, 0, shape)
    assert all(r == 0 for r, _ in final)
    assert len(steps) <= 3
    sched = Schedule(Model.GRID, shape, tuple(steps + steps[::-1]))
    assert apply_schedule(sched) == identity(32)


def test_compress_odd_band_keeps_middle():
    shape = GridShape(5, 1)
    steps, final = compress([Coord(3, 0)], 5, 0, shape)
    assert final == [Coord(0, 0)]


def test_compress_rejects_shared_columns_and_outside():
    shape = GridShape(4, 4)
    with pytest.raises(ValueError):
        compress([Coord(0, 1), Coord(2, 1)], 4, 0, shape)
    with pytest.raises(ValueError):
        compress([Coord(0, 1)], 3, 1, shape)


def test_sparsity_profile():
    shape = GridShape(3, 3)
    sigma = Permutation((3, 1, 2, 0, 4, 5, 6, 7, 8))
    assert sparsity_of(sigma, shape).max_per_column == 2
    assert sparsity_of(sigma, shape).max_per_row == 1


@pytest.mark.parametrize("m", [2, 3, 5, 8, 16])
def test_rounds_isolate_bystanders(m):
    shape = GridShape(m, m)
    bound = round_step_bound(shape)
    for seed in range(20):
        sigma = random_sparse_permutation(shape, 3, seed)
        for rnd in sparse_rounds(sigma, shape):
            assert len(rnd.steps) <= bound
            involved = {q for q, _ in rnd.pairs} | {t for _, t in rnd.pairs}
            for p, t in enumerate(rnd.before.map):
                if p not in involved:
                    assert rnd.after.map[p] == t
            for _, t in rnd.pairs:
                assert rnd.after.map[t] == t
        assert apply_schedule(sparse_route(sigma, shape)) == sigma


@pytest.mark.parametrize("rows, cols", [(3, 7), (7, 3), (1, 6), (6, 1), (2, 3)])
@pytest.mark.parametrize("orientation", ["columns", "rows"])
def test_non_square(rows, cols, orientation):
    shape = GridShape(rows, cols)
    for seed in range(10):
        sigma = random_permutation(shape.size, seed)
        assert apply_schedule(sparse_route(sigma, shape, orientation)) == sigma


def test_transpose_roundtrip():
    shape = GridShape(3, 4)
    sigma = random_permutation(12, 1)
    flipped = GridShape(4, 3)
    assert transpose_permutation(transpose_permutation(sigma, shape), flipped) == sigma
    sched = sparse_route(sigma, shape)
    assert apply_schedule(transpose_schedule(sched)) == transpose_permutation(sigma, shape)


def test_bad_orientation():
    with pytest.raises(ValueError):
        sparse_route(identity(4), GridShape(2, 2), "diagonal")


def test_round_bound_square():
    assert round_step_bound(GridShape(16, 16)) == 21
