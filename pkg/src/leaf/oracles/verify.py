"""
Self-check of the main algorithms against the brute-force oracles.

`run_verification` backs the `leaf verify` command: each check returns a
`VerificationResult` and a failing (or crashing) check never stops the others.
"""

import logging
import time
from collections.abc import Callable

import numpy as np
from pydantic import BaseModel, Field

from leaf.data.dataset import Dataset, feature_stats
from leaf.explainers.conversion import to_lle
from leaf.explainers.shapley import shapley_exact, shapley_sampled
from leaf.metrics.prescriptive import prescriptive_point, prescriptivity
from leaf.metrics.scores import f1_score, local_concordance, local_fidelity
from leaf.models.base import BlackBox, ModelSpec
from leaf.models.registry import train
from leaf.oracles.f1 import f1_bruteforce
from leaf.oracles.projection import projection_oracle
from leaf.oracles.shapley import shapley_bruteforce
from leaf.schema.explanation import LinearExplanation, NeighborhoodConfig
from leaf.schema.models import ExplainerMethod, ModelFamily
from leaf.utils.error_handler import safe_str_exception

logger = logging.getLogger(__name__)


class VerificationResult(BaseModel):
    name: str
    passed: bool
    detail: str = Field(description="Worst deviation observed, or the error raised")
    seconds: float = 0.0


def _toy_dataset(rng: np.random.Generator, n_features: int, n_rows: int = 120) -> Dataset:
    features = rng.normal(size=(n_rows, n_features))
    score = features[:, 0] * features[:, 1] + np.sin(features[:, -1])
    score += 0.3 * features.sum(axis=1)
    labels = (score > np.median(score)).astype(np.int64)
    names = tuple(f"x{i}" for i in range(n_features))
    return Dataset(features=features, labels=labels, feature_names=names, name="toy")


def _toy_models(rng: np.random.Generator, n_features: int) -> list[tuple[BlackBox, Dataset]]:
    d = _toy_dataset(rng, n_features)
    seed = int(rng.integers(0, 2**31))
    specs = [
        ModelSpec(family=ModelFamily.RF, n_estimators=5, max_depth=3, seed=seed),
        ModelSpec(family=ModelFamily.MLP, hidden_layers=[8], epochs=10, seed=seed),
    ]
    return [(train(spec, d), d) for spec in specs]


def _random_explanation(rng: np.random.Generator, n_features: int, k: int) -> LinearExplanation:
    selected = sorted(int(i) for i in rng.choice(n_features, size=k, replace=False))
    weights = {i: float(rng.uniform(0.2, 1.5) * rng.choice([-1, 1])) for i in selected}
    return LinearExplanation(
        method=ExplainerMethod.LIME,
        seed=0,
        K=k,
        n_features=n_features,
        intercept=float(rng.uniform(-0.5, 1.5)),
        weights=weights,
        selected=selected,
    )


def check_shapley_bruteforce(rng: np.random.Generator, cases: int) -> tuple[bool, str]:
    worst = 0.0
    for case in range(cases):
        n_features = int(rng.integers(2, 7))
        f, d = _toy_models(rng, n_features)[case % 2]
        x = d.features[int(rng.integers(d.n_rows))]
        rows = rng.choice(d.n_rows, size=int(rng.integers(1, 3)), replace=False)
        background = d.features[rows]
        exact = np.asarray(shapley_exact(f, x, background).phi)
        worst = max(worst, float(np.max(np.abs(exact - shapley_bruteforce(f, x, background)))))
    return worst < 1e-9, f"max |exact - brute force| = {worst:.3e} over {cases} cases"


def check_efficiency(rng: np.random.Generator, cases: int) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(cases):
        f, d = _toy_models(rng, int(rng.integers(2, 9)))[0]
        x = d.features[int(rng.integers(d.n_rows))]
        attr = shapley_exact(f, x, d.features.mean(axis=0))
        worst = max(worst, abs(attr.phi0 + sum(attr.phi) - f.predict(x)))
    return worst < 1e-9, f"max |phi0 + sum(phi) - f(x)| = {worst:.3e}"


def check_sampled_delegation(rng: np.random.Generator, cases: int) -> tuple[bool, str]:
    mismatches = 0
    for case in range(cases):
        f, d = _toy_models(rng, 8)[1]
        x = d.features[case % d.n_rows]
        background = d.features.mean(axis=0)
        sampled = shapley_sampled(f, x, background, seed=case)
        if sampled.phi != shapley_exact(f, x, background).phi:
            mismatches += 1
    return mismatches == 0, f"{mismatches} of {cases} sampled results differ from exact"


def check_local_accuracy(rng: np.random.Generator, cases: int) -> tuple[bool, str]:
    worst = 0.0
    for case in range(cases):
        f, d = _toy_models(rng, int(rng.integers(2, 8)))[case % 2]
        x = d.features[int(rng.integers(d.n_rows))]
        g = to_lle(shapley_exact(f, x, d.features.mean(axis=0)), x, d.n_features)
        if not g.meta.folded:
            worst = max(worst, 1.0 - local_concordance(f, g, x))
    return worst < 1e-9, f"max (1 - concordance) at K=F = {worst:.3e}"


def check_projection(rng: np.random.Generator, cases: int) -> tuple[bool, str]:
    worst_gap = worst_boundary = 0.0
    for _ in range(cases):
        n_features = int(rng.integers(3, 7))
        g = _random_explanation(rng, n_features, int(rng.integers(2, 4)))
        x = rng.normal(size=n_features)
        point = prescriptive_point(g, x)
        reference = projection_oracle(g, x, 0.5, radius=100.0)
        worst_gap = max(worst_gap, float(np.linalg.norm(np.asarray(point.x_prime) - reference)))
        worst_boundary = max(worst_boundary, abs(g.evaluate(point.x_prime) - 0.5))
    passed = worst_gap < 1e-3 and worst_boundary < 1e-9
    detail = f"max |x' - oracle| = {worst_gap:.3e}, max |g(x') - y'| = {worst_boundary:.3e}"
    return passed, detail


def check_f1(rng: np.random.Generator, cases: int) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(max(cases, 100)):
        a = rng.integers(0, 2, size=1000).astype(bool)
        b = rng.integers(0, 2, size=1000).astype(bool)
        worst = max(worst, abs(f1_score(a, b) - f1_bruteforce(a.tolist(), b.tolist())))
    return worst < 1e-12, f"max |F1 - oracle| = {worst:.3e}"


def check_metric_ranges(rng: np.random.Generator, cases: int) -> tuple[bool, str]:
    f, d = _toy_models(rng, 4)[0]
    stats = feature_stats(d)
    outside = 0
    invocations = 0
    for case in range(cases * 10):
        g = _random_explanation(rng, 4, int(rng.integers(1, 4)))
        if case % 5 == 0:
            g = g.model_copy(update={"weights": {}, "selected": []})
        x = stats.mean if case % 7 == 0 else d.features[int(rng.integers(d.n_rows))]
        cfg = NeighborhoodConfig(n_samples=50, seed=case)
        scores = [
            local_fidelity(f, g, x, stats, cfg),
            local_concordance(f, g, x),
            prescriptivity(f, g, x, float(rng.uniform(0.05, 0.95))),
        ]
        for score in scores:
            invocations += 1
            if score is not None and not 0.0 <= score <= 1.0:
                outside += 1
    return outside == 0, f"{outside} of {invocations} scores outside [0, 1]"


CHECKS: dict[str, Callable[[np.random.Generator, int], tuple[bool, str]]] = {
    "shapley_exact_vs_bruteforce": check_shapley_bruteforce,
    "shapley_efficiency": check_efficiency,
    "sampled_delegates_to_exact": check_sampled_delegation,
    "local_accuracy_at_full_k": check_local_accuracy,
    "projection_vs_grid_oracle": check_projection,
    "f1_vs_confusion_oracle": check_f1,
    "metric_ranges": check_metric_ranges,
}


def run_verification(
    seed: int = 0, cases: int = 20, only: list[str] | None = None
) -> list[VerificationResult]:
    """Run the oracle checks (all, or those named in `only`)."""
    results = []
    for position, (name, check) in enumerate(CHECKS.items()):
        if only and name not in only:
            continue
        rng = np.random.default_rng([seed, position])
        started = time.perf_counter()
        try:
            passed, detail = check(rng, cases)
        except Exception as e:
            logger.debug(f"check {name} crashed", exc_info=True)
            passed, detail = False, safe_str_exception(e)
        result = VerificationResult(
            name=name, passed=passed, detail=detail, seconds=time.perf_counter() - started
        )
        logger.info(f"{name}: {'PASS' if passed else 'FAIL'} ({detail})")
        results.append(result)
    return results
