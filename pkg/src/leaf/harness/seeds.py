"""
Seed derivation for sweep tasks.

Every task seed is SplitMix64(base_seed XOR mix(coordinates)), so a single
score row can be reproduced from the base seed and its coordinates alone.
Seeds are kept to 63 bits so they survive a round trip through CSV as
signed 64-bit integers.
"""

from collections.abc import Iterable

from leaf.utils.error_handler import LeafError

MASK64 = (1 << 64) - 1
MASK63 = (1 << 63) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15

# Separate stream for the neighborhood the fidelity score is measured on
FIDELITY_STREAM = 0xD1B54A32D192ED03


def splitmix64(state: int) -> int:
    z = (state + GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def mix(*parts: int) -> int:
    """Fold non-negative integers into one 64-bit value; order matters."""
    h = 0
    for part in parts:
        if part < 0:
            raise ValueError(f"seed coordinates must be non-negative, got {part}")
        h = splitmix64(h ^ (part & MASK64))
    return h


def derive_task_seed(
    base_seed: int,
    instance: int,
    repetition: int,
    explainer_id: int,
    model_id: int,
    k_index: int = 0,
) -> int:
    coordinates = mix(instance, repetition, explainer_id, model_id, k_index)
    return splitmix64((base_seed & MASK64) ^ coordinates) & MASK63


def fidelity_seed(task_seed: int) -> int:
    return splitmix64(task_seed ^ FIDELITY_STREAM) & MASK63


def assert_unique(seeds: Iterable[int]) -> None:
    """
    Raises:
        LeafError: two tasks of one run got the same seed
    """
    seen: set[int] = set()
    for seed in seeds:
        if seed in seen:
            raise LeafError(f"seed collision: {seed} derived for two tasks")
        seen.add(seed)
