import random

import pytest

from atomroute.core import (
    GridShape, MaskedRectSwap, Model, Permutation, Schedule, apply_schedule, identity,
    random_permutation, reversal, validate_schedule,
)
from atomroute.hypercube import (
    Cut, cut, cut_errors, cutset_swap, dimension_of, embed, hypercube_route,
    matching_pairs, pad_permutation, padded_embedding, strip_filler_swaps,
    subhypercube_vertices,
)


def test_embedding_shape_and_addresses():
    emb = embed(3)
    assert emb.shape == GridShape(4, 2)
    assert emb.coord_of(0b101) == (2, 1)
    assert emb.address_of((2, 1)) == 0b101
    for a in range(8):
        assert emb.shape.label(*emb.coord_of(a)) == a


def test_embed_rejects_zero():
    with pytest.raises(ValueError):
        embed(0)


@pytest.mark.parametrize("n", [0, 1, 3, 12])
def test_dimension_of_rejects(n):
    with pytest.raises(ValueError):
        dimension_of(n)


def test_subhypercube_and_cut():
    assert subhypercube_vertices(3, "1") == [4, 5, 6, 7]
    assert subhypercube_vertices(3, "") == list(range(8))
    c = cut(3, 2)
    assert isinstance(c, Cut)
    assert c.v1 == {0, 2, 4, 6}


@pytest.mark.parametrize("d", range(1, 7))
def test_every_cut_is_one_masked_swap(d):
    emb = embed(d)
    for bit in range(d):
        m = emb.mask_of(bit)
        pairs = [(x, x | m) for x in range(emb.size) if not x & m]
        step = cutset_swap(emb, bit, pairs)
        s = Schedule(Model.SELECTIVE, emb.shape, (step,))
        assert validate_schedule(s)
        assert apply_schedule(s).map == tuple(x ^ m for x in range(emb.size))


def test_cutset_swap_rejects_bad_pairs():
    emb = embed(3)
    with pytest.raises(ValueError):
        cutset_swap(emb, 0, [(0, 1)])
    with pytest.raises(ValueError):
        cutset_swap(emb, 2, [(0, 1), (1, 0)])


def test_matching_balances_suffixes():
    rng = random.Random(3)
    for d in range(2, 8):
        for _ in range(20):
            dest = list(random_permutation(1 << d, rng.randrange(10 ** 6)).map)
            pairs = matching_pairs(d, "", dest)
            half = 1 << (d - 1)
            for x, y in pairs:
                dest[x], dest[y] = dest[y], dest[x]
            low = sorted(t % half for t in dest[:half])
            assert low == list(range(half))


def test_cut_errors_on_sorted_halves_is_empty():
    assert cut_errors("", 3, identity(8)) == []
    sigma = Permutation((1, 0, 3, 2, 5, 4, 7, 6))
    assert cut_errors("", 3, sigma) == []


def test_cut_errors_checks_subcube():
    with pytest.raises(ValueError):
        cut_errors("0", 3, reversal(8))


def test_cut_errors_reversal_is_already_balanced():
    # the low half sends to suffixes 3, 2, 1, 0: nothing to fix at bit 0
    assert cut_errors("", 3, reversal(8)) == []


def test_cut_errors_unbalanced():
    sigma = Permutation((0, 4, 1, 5, 2, 6, 3, 7))
    steps = cut_errors("", 3, sigma)
    assert len(steps) == 1 and isinstance(steps[0], MaskedRectSwap)


@pytest.mark.parametrize("d", range(1, 9))
def test_route_length(d):
    for seed in range(30):
        sigma = random_permutation(1 << d, seed)
        sched = hypercube_route(sigma)
        assert apply_schedule(sched) == sigma
        assert len(sched) <= 2 * d - 1


def test_route_identity_is_empty():
    assert len(hypercube_route(identity(16))) == 0


def test_padding_roundtrip():
    shape = GridShape(3, 5)
    emb = padded_embedding(shape)
    assert emb.shape == GridShape(8, 8)
    sigma = random_permutation(15, 2)
    padded = pad_permutation(sigma, shape, emb)
    big = emb.shape
    real = {big.label(*shape.coord(p)) for p in range(15)}
    filler = set(range(big.size)) - real
    sched = strip_filler_swaps(hypercube_route(padded), filler)
    result = apply_schedule(sched)
    for p in real:
        assert result(p) == padded(p)
    assert len(sched) <= 2 * emb.d - 1
