"""Analytic models of navigation behavior, and a simulation harness.

Two idealized per-item category-count profiles (a linear ramp and a
quadratic one) give closed forms for the mean and variance of categories
per item, which in turn predict how fast successive clicks narrow the item
list: each click keeps on average a fraction mean/n of what was there.

:func:`monte_carlo` checks those predictions the honest way: generate a
random index from the profile, click around with the real query engine and
compare. Identical seed and parameters always reproduce the same report.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .index import AssociationIndex, from_arrays
from .postings import ID_DTYPE
from .query import Selection, evaluate

LINEAR = "LINEAR"
QUADRATIC = "QUADRATIC"
PROFILES = (LINEAR, QUADRATIC)


@dataclass(frozen=True)
class ModelParams:
    """Shape of a synthetic categorization.

    Per-item category counts run from ``max_cats_per_item`` down to
    ``min_cats_per_item`` along the chosen profile; categories themselves
    are assigned uniformly at random.
    """

    item_count: int
    category_count: int
    max_cats_per_item: int
    min_cats_per_item: int
    profile: str = LINEAR
    seed: int = 0

    def __post_init__(self) -> None:
        if self.item_count < 2:
            raise ValueError("item_count must be >= 2")
        if not 1 <= self.min_cats_per_item <= self.max_cats_per_item:
            raise ValueError("need 1 <= min_cats_per_item <= max_cats_per_item")
        if self.max_cats_per_item > self.category_count:
            raise ValueError(
                "max_cats_per_item exceeds the category vocabulary; "
                "items cannot repeat a category"
            )
        if self.profile not in PROFILES:
            raise ValueError(f"unknown profile {self.profile!r}")


@dataclass(frozen=True)
class RandomOverlap:
    """Chance-level co-occurrence between categories under random assignment.

    ``pair(i, j)`` estimates the overlap of two categories from their item
    counts alone; ``per_category`` sums it over all partners. These are
    estimates, not probabilities: a heavy pair can score above 1 and is
    reported unclamped. ``mean_exact`` averages ``per_category`` directly;
    ``mean_rough`` is the shorthand (mean cats per item / category count)
    squared, kept alongside because it is the figure quoted in quick sizing
    arguments. The shorthand is per partner pair while the exact form sums
    over all partners, so the two sit roughly a factor of the category
    count apart; report them side by side, never interchangeably.
    """

    item_count: int
    items_per_category: np.ndarray
    per_category: np.ndarray
    mean_exact: float
    mean_rough: float

    def pair(self, a: int, b: int) -> float:
        F = self.items_per_category
        return float(F[a]) * float(F[b]) / self.item_count**2


def random_overlap(
    source: AssociationIndex | Sequence[int] | np.ndarray,
    item_count: int | None = None,
) -> RandomOverlap:
    """Overlap estimates from an index or a raw items-per-category profile."""
    if isinstance(source, AssociationIndex):
        degrees = source.degrees()[0].astype(np.float64)
        N = source.N
    else:
        degrees = np.asarray(source, dtype=np.float64)
        if item_count is None:
            raise ValueError("item_count is required with a raw degree profile")
        N = item_count
    n = len(degrees)
    S = float(degrees.sum())
    per_cat = (S * degrees - degrees**2) / N**2
    mean_cats_per_item = S / N
    return RandomOverlap(
        item_count=N,
        items_per_category=degrees,
        per_category=per_cat,
        mean_exact=float(per_cat.mean()),
        mean_rough=mean_cats_per_item**2 / n**2,
    )


def narrowing_prediction(
    item_count: int, category_count: int, mean_cats_per_item: float, clicks: int
) -> float:
    """Expected matching items after ``clicks`` independent selections."""
    if not 0 < mean_cats_per_item <= category_count:
        raise ValueError("mean_cats_per_item must be in (0, category_count]")
    if clicks < 0:
        raise ValueError("clicks must be >= 0")
    return item_count * (mean_cats_per_item / category_count) ** clicks


@dataclass(frozen=True)
class ModelPrediction:
    """Closed-form consequences of a profile: moments, narrowing, overlap."""

    params: ModelParams
    mean_cats_per_item: float
    mean_sq_cats_per_item: float
    variance_cats_per_item: float
    overlap: RandomOverlap = field(repr=False)

    @property
    def narrowing_factor(self) -> float:
        return self.mean_cats_per_item / self.params.category_count

    def expected_hits(self, clicks: int) -> float:
        return narrowing_prediction(
            self.params.item_count,
            self.params.category_count,
            self.mean_cats_per_item,
            clicks,
        )

    def profile_counts(self) -> np.ndarray:
        """The idealized per-item count at each rank j = 1..item_count."""
        p = self.params
        N = p.item_count
        hi = float(p.max_cats_per_item)
        lo = float(p.min_cats_per_item)
        j = np.arange(1, N + 1, dtype=np.float64)
        if p.profile == LINEAR:
            return (hi * (N - j) + lo * (j - 1)) / (N - 1)
        return hi - j**2 * (hi - lo) / N**2


def _prediction(params: ModelParams) -> ModelPrediction:
    hi = float(params.max_cats_per_item)
    lo = float(params.min_cats_per_item)
    if params.profile == LINEAR:
        mean = (hi + lo) / 2
        # The printed companion form of the variance drops the +hi*lo cross
        # term; integrating the ramp keeps it, and only the + form is
        # consistent with the variance below.
        mean_sq = (hi**2 + lo**2 + hi * lo) / 3
        var = (hi - lo) ** 2 / 12
    else:
        mean = 2 * hi / 3 + lo / 3
        var = 4 * (hi - lo) ** 2 / 45
        mean_sq = var + mean**2
    S = params.item_count * mean
    uniform = np.full(params.category_count, S / params.category_count)
    return ModelPrediction(
        params=params,
        mean_cats_per_item=mean,
        mean_sq_cats_per_item=mean_sq,
        variance_cats_per_item=var,
        overlap=random_overlap(uniform, params.item_count),
    )


def linear_model(params: ModelParams) -> ModelPrediction:
    if params.profile != LINEAR:
        raise ValueError(f"params carry profile {params.profile!r}, not {LINEAR}")
    return _prediction(params)


def quadratic_model(params: ModelParams) -> ModelPrediction:
    if params.profile != QUADRATIC:
        raise ValueError(f"params carry profile {params.profile!r}, not {QUADRATIC}")
    return _prediction(params)


def predict(params: ModelParams) -> ModelPrediction:
    return _prediction(params)


# ---------------------------------------------------------------------------
# Monte Carlo


def random_index(
    params: ModelParams, seed_seq: np.random.SeedSequence | None = None
) -> AssociationIndex:
    """One random index drawn from the profile.

    Counts are drawn per item (the ramp read as a distribution: LINEAR is
    uniform on [min, max], QUADRATIC piles up near the top); the categories
    themselves are a uniform distinct sample. Unused categories can occur
    and are kept with empty postings.
    """
    if seed_seq is None:
        seed_seq = np.random.SeedSequence(params.seed)
    count_ss, assign_ss = seed_seq.spawn(2)
    rng = np.random.default_rng(count_ss)
    N, n = params.item_count, params.category_count
    hi, lo = params.max_cats_per_item, params.min_cats_per_item
    if params.profile == LINEAR:
        counts = rng.integers(lo, hi + 1, size=N)
    else:
        u = rng.random(N)
        counts = np.rint(hi - u**2 * (hi - lo)).astype(np.int64)
    sampler = random.Random(int(assign_ss.generate_state(1)[0]))
    universe = range(n)
    rows = [
        np.asarray(sorted(sampler.sample(universe, int(k))), dtype=ID_DTYPE)
        for k in counts
    ]
    return from_arrays(rows, n)


@dataclass(frozen=True)
class MonteCarloReport:
    """Empirical click behavior next to the closed-form predictions."""

    params: ModelParams
    trials: int
    walks_per_trial: int
    mean_hits_1: float
    mean_hits_2: float
    std_hits_1: float
    std_hits_2: float
    mean_available_after_1: float
    predicted_hits_1: float
    predicted_hits_2: float

    @property
    def relative_error_1(self) -> float:
        return abs(self.mean_hits_1 - self.predicted_hits_1) / self.predicted_hits_1

    @property
    def relative_error_2(self) -> float:
        return abs(self.mean_hits_2 - self.predicted_hits_2) / self.predicted_hits_2

    def as_dict(self) -> dict:
        return {
            "item_count": self.params.item_count,
            "category_count": self.params.category_count,
            "max_cats_per_item": self.params.max_cats_per_item,
            "min_cats_per_item": self.params.min_cats_per_item,
            "profile": self.params.profile,
            "seed": self.params.seed,
            "trials": self.trials,
            "walks_per_trial": self.walks_per_trial,
            "mean_hits_1": self.mean_hits_1,
            "mean_hits_2": self.mean_hits_2,
            "std_hits_1": self.std_hits_1,
            "std_hits_2": self.std_hits_2,
            "mean_available_after_1": self.mean_available_after_1,
            "predicted_hits_1": self.predicted_hits_1,
            "predicted_hits_2": self.predicted_hits_2,
            "relative_error_1": self.relative_error_1,
            "relative_error_2": self.relative_error_2,
        }


def monte_carlo(
    params: ModelParams, trials: int, walks_per_trial: int = 32
) -> MonteCarloReport:
    """Generate random indexes per the profile and click around.

    Each trial builds a fresh index; each walk clicks one category chosen
    uniformly over the whole vocabulary, then one chosen uniformly over the
    categories still available, recording the matching-item counts after
    each click (a first click that matches nothing scores both as 0). All
    randomness derives from ``params.seed``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if walks_per_trial < 1:
        raise ValueError("walks_per_trial must be >= 1")
    hits1: list[int] = []
    hits2: list[int] = []
    avail1: list[int] = []
    root = np.random.SeedSequence(params.seed)
    for trial_ss in root.spawn(trials):
        index_ss, click_ss = trial_ss.spawn(2)
        ix = random_index(params, index_ss)
        clicks = np.random.default_rng(click_ss)
        for _ in range(walks_per_trial):
            first = int(clicks.integers(params.category_count))
            res = evaluate(ix, Selection.of(first))
            hits1.append(res.item_count)
            avail1.append(len(res.available))
            if res.available:
                # Insertion order is ascending category ID, so indexing the
                # keys is deterministic.
                options = list(res.available)
                second = options[int(clicks.integers(len(options)))]
                hits2.append(res.available[second])
            else:
                hits2.append(0)
    pred = _prediction(params)
    return MonteCarloReport(
        params=params,
        trials=trials,
        walks_per_trial=walks_per_trial,
        mean_hits_1=float(np.mean(hits1)),
        mean_hits_2=float(np.mean(hits2)),
        std_hits_1=float(np.std(hits1)),
        std_hits_2=float(np.std(hits2)),
        mean_available_after_1=float(np.mean(avail1)),
        predicted_hits_1=pred.expected_hits(1),
        predicted_hits_2=pred.expected_hits(2),
    )
