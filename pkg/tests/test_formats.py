import random

import pytest

from atomroute.core import (
    GridShape, InOrderSwap1D, MaskedRectSwap, Model, Rectangle, Schedule,
    random_permutation, random_step,
)
from atomroute.formats import (
    FormatError, dumps_permutation, dumps_schedule, loads_permutation,
    loads_schedule, read_schedule, write_schedule,
)


def test_permutation_text_is_canonical():
    text = dumps_permutation(random_permutation(4, 0), GridShape(2, 2))
    assert text.startswith('{"rows":2,"cols":2,"map":[')
    assert text.endswith("]}\n")
    perm, shape = loads_permutation(text)
    assert shape == GridShape(2, 2)
    assert dumps_permutation(perm, shape) == text


def test_schedule_roundtrip_with_mask(tmp_path):
    step = MaskedRectSwap(Rectangle((0,), (0, 1)), Rectangle((1,), (0, 1)), (True, False))
    sched = Schedule(Model.SELECTIVE, GridShape(2, 2), (step,))
    path = tmp_path / "s.json"
    write_schedule(path, sched)
    assert '"mask":[1,0]' in path.read_text()
    assert read_schedule(path) == sched


@pytest.mark.parametrize("text", [
    "not json",
    '{"n":3,"map":[0,0,1]}',
    '{"n":4,"map":[0,1,2]}',
    '{"map":[0]}',
])
def test_bad_permutations(text):
    with pytest.raises(FormatError):
        loads_permutation(text)


@pytest.mark.parametrize("text", [
    '{"model":"warp","shape":{"n":2},"steps":[]}',
    '{"model":"grid","shape":{"n":4},"steps":[]}',
    '{"model":"swap1d","shape":{"n":4},"steps":[{"kind":"teleport"}]}',
    '{"model":"selective","shape":{"rows":1,"cols":2},"steps":[{"kind":"masked",'
    '"r1":{"rows":[0],"cols":[0]},"r2":{"rows":[0],"cols":[1]},"mask":[2]}]}',
])
def test_bad_schedules(text):
    with pytest.raises(FormatError):
        loads_schedule(text)


def test_invalid_steps_still_load():
    # parsing is syntactic; legality is the verifier's job
    text = '{"model":"swap1d","shape":{"n":4},"steps":[{"kind":"swap1d","a":[1,0],"b":[2,3]}]}'
    assert loads_schedule(text).steps == (InOrderSwap1D((1, 0), (2, 3)),)


def test_random_roundtrips():
    rng = random.Random(5)
    for model, shape in [("riffle", 9), ("swap1d", 9), ("grid", GridShape(3, 3)),
                         ("selective", GridShape(2, 4))]:
        sched = Schedule(model, shape, tuple(random_step(model, shape, rng) for _ in range(5)))
        text = dumps_schedule(sched)
        assert loads_schedule(text) == sched
        assert dumps_schedule(loads_schedule(text)) == text
