import itertools

import pytest

from leaf.harness.seeds import (
    MASK63,
    assert_unique,
    derive_task_seed,
    fidelity_seed,
    mix,
    splitmix64,
)
from leaf.utils.error_handler import LeafError


def test_splitmix64_reference_value():
    assert splitmix64(0) == 0xE220A8397B1DCDAF


def test_derived_seed_is_deterministic():
    assert derive_task_seed(7, 3, 1, 0, 2, 1) == derive_task_seed(7, 3, 1, 0, 2, 1)


@pytest.mark.parametrize(
    "coordinates",
    [
        (8, 3, 1, 0, 2, 1),
        (7, 4, 1, 0, 2, 1),
        (7, 3, 2, 0, 2, 1),
        (7, 3, 1, 1, 2, 1),
        (7, 3, 1, 0, 3, 1),
        (7, 3, 1, 0, 2, 0),
    ],
)
def test_every_coordinate_matters(coordinates):
    assert derive_task_seed(*coordinates) != derive_task_seed(7, 3, 1, 0, 2, 1)


def test_seeds_fit_in_63_bits():
    for base in (0, 1, 2**64 - 1):
        seed = derive_task_seed(base, 0, 0, 0, 0)
        assert 0 <= seed <= MASK63
        assert 0 <= fidelity_seed(seed) <= MASK63


def test_fidelity_stream_is_separate():
    seed = derive_task_seed(0, 0, 0, 0, 0)
    assert fidelity_seed(seed) != seed


def test_mix_rejects_negative():
    with pytest.raises(ValueError, match="non-negative"):
        mix(1, -1)


def test_no_collisions_on_a_sweep_grid():
    seeds = [
        derive_task_seed(11, *coordinates)
        for coordinates in itertools.product(range(20), range(50), range(2), range(5), range(3))
    ]
    assert_unique(seeds)


def test_assert_unique_detects_collision():
    with pytest.raises(LeafError, match="seed collision"):
        assert_unique([1, 2, 1])
