"""
Shapley attributions against a background set.

The value of a coalition S is the black-box output averaged over the
background rows, with the features in S taken from x and the others from
the background row. `shapley_exact` enumerates every coalition;
`shapley_sampled` is a KernelSHAP-style weighted regression over a budget
of coalitions with the efficiency constraint enforced exactly.
"""

import itertools
import logging

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.special import binom

from leaf.core.settings import settings
from leaf.models.base import BlackBox
from leaf.schema.explanation import ShapleyAttribution
from leaf.schema.models import ShapleyMode
from leaf.utils.error_handler import ExplainerError

logger = logging.getLogger(__name__)

EXACT_MAX_FEATURES = 25


def default_budget(n_features: int) -> int:
    return 2 * n_features + 2**11


def budget_floor(n_features: int) -> int:
    return 2 * n_features + 2


def _as_background(background: ArrayLike, n_features: int) -> NDArray[np.float64]:
    rows = np.asarray(background, dtype=float)
    if rows.ndim == 1:
        rows = rows[None, :]
    if rows.ndim != 2 or rows.shape[0] < 1 or rows.shape[1] != n_features:
        raise ExplainerError(
            f"background must hold at least one row of {n_features} values, got {rows.shape}"
        )
    if not np.all(np.isfinite(rows)):
        raise ExplainerError("background must be finite")
    return rows


def _as_instance(f: BlackBox, x: ArrayLike) -> NDArray[np.float64]:
    x = np.asarray(x, dtype=float)
    if x.shape != (f.n_features,):
        raise ExplainerError(f"expected an instance of length {f.n_features}, got {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ExplainerError("instance must be finite")
    return x


def coalition_values(
    f: BlackBox,
    x: NDArray[np.float64],
    background: NDArray[np.float64],
    masks: NDArray[np.bool_],
) -> NDArray[np.float64]:
    """
    v(S) for every row of `masks` (True = feature taken from x).

    Black-box calls are batched so that at most PREDICT_CHUNK_ROWS points
    are evaluated at a time.
    """
    n_background = background.shape[0]
    per_chunk = max(1, settings.PREDICT_CHUNK_ROWS // n_background)
    values = np.empty(masks.shape[0])
    for start in range(0, masks.shape[0], per_chunk):
        block = masks[start : start + per_chunk]
        points = np.where(block[:, None, :], x, background[None, :, :])
        outputs = f.predict_batch(points.reshape(-1, x.shape[0]))
        values[start : start + per_chunk] = outputs.reshape(block.shape[0], n_background).mean(1)
    return values


def _masks_for_codes(codes: NDArray[np.int64], n_features: int) -> NDArray[np.bool_]:
    return ((codes[:, None] >> np.arange(n_features)) & 1).astype(bool)


def shapley_exact(
    f: BlackBox,
    x: ArrayLike,
    background: ArrayLike,
    budget: int | None = None,
    seed: int = 0,
) -> ShapleyAttribution:
    """
    Exact Shapley values by enumerating all 2^F coalitions.

    Each coalition S contributes +w(|S|-1)·v(S) to the features inside it and
    -w(|S|)·v(S) to those outside, with w(s) = s!(F-s-1)!/F!.

    Raises:
        ExplainerError: F above the enumeration cap (use `shapley_sampled`)
    """
    x = _as_instance(f, x)
    n_features = x.shape[0]
    if n_features > EXACT_MAX_FEATURES:
        raise ExplainerError(
            f"exact enumeration is capped at {EXACT_MAX_FEATURES} features, got {n_features}; "
            "use shapley_sampled"
        )
    rows = _as_background(background, n_features)

    # weight[s] = 1 / (F * C(F-1, s)), s = 0..F-1
    weight = 1.0 / (n_features * binom(n_features - 1, np.arange(n_features)))
    n_coalitions = 2**n_features
    per_chunk = max(1, settings.PREDICT_CHUNK_ROWS // rows.shape[0])

    phi = np.zeros(n_features)
    phi0 = 0.0
    for start in range(0, n_coalitions, per_chunk):
        codes = np.arange(start, min(start + per_chunk, n_coalitions), dtype=np.int64)
        masks = _masks_for_codes(codes, n_features)
        values = coalition_values(f, x, rows, masks)
        sizes = masks.sum(axis=1)
        if start == 0:
            phi0 = float(values[0])
        inside = np.where(sizes > 0, weight[np.maximum(sizes - 1, 0)], 0.0) * values
        outside = np.where(sizes < n_features, weight[np.minimum(sizes, n_features - 1)], 0.0)
        members = masks.astype(float)
        phi += members.T @ inside - (1.0 - members).T @ (outside * values)

    logger.debug(f"shapley_exact: {n_coalitions} coalitions x {rows.shape[0]} background rows")
    return ShapleyAttribution(
        phi0=phi0,
        phi=phi.tolist(),
        background=rows.tolist(),
        mode=ShapleyMode.EXACT,
        budget=budget if budget is not None else n_coalitions,
        n_coalitions=n_coalitions,
        seed=seed,
    )


def _size_plan(n_features: int) -> tuple[list[int], NDArray[np.float64], NDArray[np.float64]]:
    """
    Coalition sizes 1..ceil((F-1)/2), each paired with its complement size.

    Returns (sizes, coalitions per entry, kernel mass per entry), counting
    both size s and F-s for a paired entry.
    """
    sizes = list(range(1, int(np.ceil((n_features - 1) / 2)) + 1))
    paired = np.array([2.0 if s != n_features - s else 1.0 for s in sizes])
    s = np.array(sizes, dtype=float)
    counts = binom(n_features, s) * paired
    mass = paired * (n_features - 1) / (s * (n_features - s))
    return sizes, counts, mass


def _kernel_weight(n_features: int, size: int) -> float:
    """Shapley-kernel weight of one coalition of the given size."""
    return (n_features - 1) / (binom(n_features, size) * size * (n_features - size))


def _with_complements(masks: NDArray[np.bool_], n_features: int, size: int) -> NDArray[np.bool_]:
    return masks if 2 * size == n_features else np.vstack([masks, ~masks])


def _enumerate_sizes(
    n_features: int, budget: int
) -> tuple[list[NDArray[np.bool_]], list[NDArray[np.float64]], int, int]:
    """
    Fully enumerate coalition sizes, smallest first, while the budget covers them.

    Size 1 (with F-1) is always enumerated. A further size is enumerated when
    its share of the remaining kernel mass buys at least one draw per
    coalition; the first size that fails stops the enumeration.

    Returns (masks, weights, sizes enumerated, budget left).
    """
    sizes, counts, mass = _size_plan(n_features)
    remaining = mass / mass.sum()
    left = budget
    masks: list[NDArray[np.bool_]] = []
    weights: list[NDArray[np.float64]] = []
    n_full = 0
    for index, size in enumerate(sizes):
        if index > 0 and left * remaining[index] / counts[index] < 1.0 - 1e-8:
            break
        members = np.array(list(itertools.combinations(range(n_features), size)))
        block = np.zeros((members.shape[0], n_features), dtype=bool)
        np.put_along_axis(block, members, True, axis=1)
        block = _with_complements(block, n_features, size)
        masks.append(block)
        weights.append(np.full(block.shape[0], _kernel_weight(n_features, size)))
        left -= block.shape[0]
        n_full += 1
        if remaining[index] < 1.0:
            remaining = remaining / (1.0 - remaining[index])
    return masks, weights, n_full, left


def _draw_coalitions(
    n_features: int, n_full: int, n_draws: int, rng: np.random.Generator
) -> tuple[NDArray[np.bool_], NDArray[np.float64]]:
    """
    Distinct coalitions of the sizes not enumerated, and how often each was drawn.

    A size entry is drawn with probability proportional to its kernel mass
    (halved when it is paired, since a draw adds the subset and its
    complement), members uniformly. Draws stop once `n_draws` distinct
    coalitions are held.
    """
    sizes, counts, mass = _size_plan(n_features)
    sizes, counts, mass = sizes[n_full:], counts[n_full:], mass[n_full:]
    if not sizes or n_draws <= 0:
        return np.zeros((0, n_features), dtype=bool), np.zeros(0)
    paired = np.array([s != n_features - s for s in sizes])
    p = np.where(paired, mass / 2.0, mass)
    p = p / p.sum()
    target = min(n_draws, int(counts.sum()))

    seen: dict[bytes, int] = {}
    masks: list[NDArray[np.bool_]] = []
    tallies: list[int] = []

    def add(mask: NDArray[np.bool_]) -> None:
        key = mask.tobytes()
        if key in seen:
            tallies[seen[key]] += 1
        elif len(masks) < target:
            seen[key] = len(masks)
            masks.append(mask)
            tallies.append(1)

    max_attempts = 50 * target
    attempts = 0
    while len(masks) < target and attempts < max_attempts:
        attempts += 1
        index = rng.choice(len(sizes), p=p)
        mask = np.zeros(n_features, dtype=bool)
        mask[rng.choice(n_features, size=sizes[index], replace=False)] = True
        add(mask)
        if paired[index]:
            add(~mask)

    if not masks:
        return np.zeros((0, n_features), dtype=bool), np.zeros(0)
    return np.vstack(masks), np.asarray(tallies, dtype=float)


def shapley_sampled(
    f: BlackBox,
    x: ArrayLike,
    background: ArrayLike,
    budget: int | None = None,
    seed: int = 0,
) -> ShapleyAttribution:
    """
    Approximate Shapley values from a budget of coalitions.

    The budget counts the coalitions entering the regression; the empty and
    full coalitions only fix phi_0 = v(empty) and phi_0 + sum(phi) = f(x).
    Coalition sizes are enumerated completely, smallest first with their
    complements, for as long as the budget allows (the F singletons and F
    leave-one-out coalitions always are), each coalition with its exact
    Shapley-kernel weight. The rest of the budget is sampled from the
    remaining sizes, and the sampled coalitions share the remaining kernel
    mass in proportion to how often each was drawn. When every size fits
    the result equals the exact Shapley values; when the budget covers all
    2^F coalitions this delegates to `shapley_exact`.

    Raises:
        ExplainerError: budget below 2F + 2
    """
    x = _as_instance(f, x)
    n_features = x.shape[0]
    budget = default_budget(n_features) if budget is None else budget
    if budget < budget_floor(n_features):
        raise ExplainerError(
            f"coalition budget {budget} below the floor 2F+2 = {budget_floor(n_features)}"
        )
    if 2**n_features <= budget:
        return shapley_exact(f, x, background, budget=budget, seed=seed)

    rows = _as_background(background, n_features)
    rng = np.random.default_rng(seed)

    full_masks, full_weights, n_full, left = _enumerate_sizes(n_features, budget)
    sampled_masks, tallies = _draw_coalitions(n_features, n_full, left, rng)
    _, _, mass = _size_plan(n_features)
    sampled_weights = mass[n_full:].sum() * tallies / tallies.sum() if tallies.size else tallies

    masks = np.vstack([*full_masks, sampled_masks])
    weights = np.concatenate([*full_weights, sampled_weights])

    ends = np.vstack([np.zeros(n_features, dtype=bool), np.ones(n_features, dtype=bool)])
    values = coalition_values(f, x, rows, np.vstack([ends, masks]))
    phi0, full = float(values[0]), float(values[1])
    values = values[2:]

    # eliminate the last attribution: phi_F = (full - phi0) - sum(phi_1..phi_{F-1})
    z = masks.astype(float)
    total = full - phi0
    design = z[:, :-1] - z[:, -1:]
    target = values - phi0 - z[:, -1] * total
    weighted = design * weights[:, None]
    try:
        head = np.linalg.solve(design.T @ weighted, weighted.T @ target)
    except np.linalg.LinAlgError:
        logger.warning("shapley_sampled: singular normal equations, falling back to lstsq")
        root = np.sqrt(weights)
        head = np.linalg.lstsq(root[:, None] * design, root * target, rcond=None)[0]
    phi = np.append(head, total - head.sum())

    logger.debug(
        f"shapley_sampled: {masks.shape[0]} coalitions ({sampled_masks.shape[0]} sampled) "
        f"for budget {budget}"
    )
    return ShapleyAttribution(
        phi0=phi0,
        phi=phi.tolist(),
        background=rows.tolist(),
        mode=ShapleyMode.SAMPLED,
        budget=budget,
        n_coalitions=int(masks.shape[0]),
        seed=seed,
    )
