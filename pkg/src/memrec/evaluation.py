"""Offline top-k evaluation: ranking metrics and the leave-newest-out harness.

Each held-out post is scored against the training folksonomy only, with the
reference time pinned to the post's own timestamp. Metrics are averaged
uniformly over held-out posts with ``math.fsum``, an order-independent exact
sum, so results are identical no matter how the work is parallelized.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import AbstractSet, Sequence

from .activation import DecayParams
from .data import Post, SplitSpec
from .recommenders import ALGORITHMS, HybridParams, ScoredList, recommend

__all__ = [
    "AlgorithmReport",
    "EvalReport",
    "precision_recall_at_k",
    "f1_at_k",
    "ndcg_at_k",
    "evaluate",
]

_CURVE_KS = tuple(range(1, 11))


@dataclass(frozen=True)
class AlgorithmReport:
    """Mean metrics of one algorithm over all held-out posts."""

    f1_at_5: float
    ndcg_at_10: float
    pr_curve: tuple[tuple[int, float, float], ...]
    users_evaluated: int


@dataclass(frozen=True)
class EvalReport:
    per_algorithm: dict[str, AlgorithmReport]


def precision_recall_at_k(
    recommended: ScoredList,
    relevant: AbstractSet[str],
    k: int,
    strict_k: bool = False,
) -> tuple[float, float]:
    """Precision and recall of the top-k recommendations.

    Precision divides by ``min(k, len(recommended))`` so short candidate
    lists are not penalized for slots they never filled; pass
    ``strict_k=True`` to always divide by k. An empty recommendation list
    has precision 0 by convention.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if not relevant:
        raise ValueError("relevant set must be non-empty")
    top = recommended.ids[:k]
    hits = sum(1 for item in top if item in relevant)
    denominator = k if strict_k else min(k, len(recommended.items))
    precision = hits / denominator if denominator else 0.0
    recall = hits / len(relevant)
    return precision, recall


def f1_at_k(
    recommended: ScoredList,
    relevant: AbstractSet[str],
    k: int,
    strict_k: bool = False,
) -> float:
    """Harmonic mean of precision@k and recall@k; 0 when both are 0."""
    precision, recall = precision_recall_at_k(recommended, relevant, k, strict_k)
    if precision + recall == 0.0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def ndcg_at_k(recommended: ScoredList, relevant: AbstractSet[str], k: int) -> float:
    """Binary-relevance nDCG: position-discounted hits over the ideal ranking."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if not relevant:
        raise ValueError("relevant set must be non-empty")
    dcg = 0.0
    for i, item in enumerate(recommended.ids[:k], start=1):
        if item in relevant:
            dcg += 1.0 / math.log2(i + 1)
    ideal = 0.0
    for i in range(1, min(k, len(relevant)) + 1):
        ideal += 1.0 / math.log2(i + 1)
    return dcg / ideal


# Worker state for process pools: set once per worker via the initializer so
# the training folksonomy is not re-pickled for every held-out post.
_STATE: tuple | None = None


def _init_state(train, algorithms, decay, hybrid, strict_k):
    global _STATE
    _STATE = (train, algorithms, decay, hybrid, strict_k)


def _score_post(post: Post) -> list[tuple[float, float, tuple[tuple[float, float], ...]]]:
    train, algorithms, decay, hybrid, strict_k = _STATE
    relevant = frozenset(post.tags)
    query = (post.user, post.resource, post.timestamp)
    row = []
    for algorithm in algorithms:
        ranked = recommend(algorithm, train, query, max(_CURVE_KS), decay, hybrid)
        curve = tuple(
            precision_recall_at_k(ranked, relevant, k, strict_k) for k in _CURVE_KS
        )
        for (_, earlier), (_, later) in zip(curve, curve[1:]):
            assert later >= earlier, "recall must be non-decreasing in k"
        row.append(
            (
                f1_at_k(ranked, relevant, 5, strict_k),
                ndcg_at_k(ranked, relevant, 10),
                curve,
            )
        )
    return row


def evaluate(
    split: SplitSpec,
    algorithms: Sequence[str],
    decay: DecayParams = DecayParams(),
    hybrid: HybridParams = HybridParams(),
    jobs: int = 1,
    strict_k: bool = False,
) -> EvalReport:
    """Evaluate algorithms over every held-out post of a chronological split.

    Returns mean F1@5, mean nDCG@10, and the mean precision/recall curve for
    k = 1..10 per algorithm. ``jobs`` > 1 spreads posts over worker
    processes; results are bit-identical to the serial run.
    """
    if not split.test:
        raise ValueError("empty test set: nothing to evaluate")
    unknown = [a for a in algorithms if a not in ALGORITHMS]
    if unknown:
        raise ValueError(f"unknown algorithms {unknown}; valid ids: {', '.join(ALGORITHMS)}")
    if len(set(algorithms)) != len(algorithms):
        raise ValueError("duplicate algorithm ids")
    posts = split.test
    initargs = (split.train, tuple(algorithms), decay, hybrid, strict_k)
    if jobs <= 1 or len(posts) < 2:
        _init_state(*initargs)
        rows = [_score_post(post) for post in posts]
    else:
        workers = min(jobs, len(posts))
        chunk = max(1, len(posts) // (workers * 4))
        with ProcessPoolExecutor(
            max_workers=workers, initializer=_init_state, initargs=initargs
        ) as pool:
            rows = list(pool.map(_score_post, posts, chunksize=chunk))
    n = len(posts)
    per_algorithm: dict[str, AlgorithmReport] = {}
    for ai, algorithm in enumerate(algorithms):
        f1 = math.fsum(row[ai][0] for row in rows) / n
        ndcg = math.fsum(row[ai][1] for row in rows) / n
        curve = tuple(
            (
                k,
                math.fsum(row[ai][2][ki][0] for row in rows) / n,
                math.fsum(row[ai][2][ki][1] for row in rows) / n,
            )
            for ki, k in enumerate(_CURVE_KS)
        )
        per_algorithm[algorithm] = AlgorithmReport(f1, ndcg, curve, n)
    return EvalReport(per_algorithm)
