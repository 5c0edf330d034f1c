"""Memory-activation math core.

Implements the ACT-R style activation of an item: a base-level component
driven by how often and how recently the item was used, plus an associative
component that primes items related to the current context.

Base level for an item with past occurrence times ``t_1..t_n`` at reference
time ``now``::

    base = ln( sum_j  max(now - t_j, min_elapsed) ** -d )

The negative exponent ``d`` gives power-law forgetting: each occurrence's
contribution fades with elapsed time, so frequent *and* recent items score
highest. Elapsed times are clamped below at ``min_elapsed`` (default one
second, the dataset resolution) because the power term is undefined at zero.

The associative component for item ``i`` under a context of weighted tags is
``sum_j weight_j * strength(j, i)``, where the strength of association is the
conditional co-use rate ``cooccurrence(i, j) / tag_count(j)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .data import Folksonomy

__all__ = [
    "DecayParams",
    "OccurrenceHistory",
    "ContextProfile",
    "base_level",
    "context_profile",
    "association_strength",
    "activation",
]

#: Occurrence timestamps (seconds since epoch) of one item for one owner.
OccurrenceHistory = Sequence[float]

#: Weighted context tags ``(tag, weight)``; weights are >= 0 and sum to 1.
ContextProfile = Sequence[tuple[str, float]]


@dataclass(frozen=True)
class DecayParams:
    """Decay exponent and the lower clamp for elapsed seconds."""

    d: float = 0.5
    min_elapsed: float = 1.0

    def __post_init__(self):
        if not self.d > 0:
            raise ValueError("decay exponent d must be > 0")
        if self.min_elapsed < 1:
            raise ValueError("min_elapsed must be >= 1 second")


def base_level(hist: OccurrenceHistory, now: float, params: DecayParams = DecayParams()) -> float:
    """Base-level activation (natural-log units) of one occurrence history.

    Raises ValueError for an empty history (callers must treat absent items
    as "no base-level score" rather than feeding -inf into sums) and for
    occurrences after ``now`` (a leakage guard for offline protocols).
    """
    if not hist:
        raise ValueError("empty occurrence history")
    total = 0.0
    for t in hist:
        if t > now:
            raise ValueError(f"occurrence at {t} is after reference time {now}")
        total += max(now - t, params.min_elapsed) ** -params.d
    return math.log(total)


def context_profile(f: Folksonomy, resource: str) -> list[tuple[str, float]]:
    """Tags previously assigned to a resource, weighted by relative frequency.

    Weights are assignment counts normalized to sum to 1; an unseen resource
    yields an empty profile. Tags are listed in ascending id order.
    """
    counts: dict[str, int] = {}
    for post in f.posts_on(resource):
        for tag in post.tags:
            counts[tag] = counts.get(tag, 0) + 1
    total = sum(counts.values())
    return [(tag, counts[tag] / total) for tag in sorted(counts)]


def association_strength(f: Folksonomy, j: str, i: str) -> float:
    """Conditional co-use rate of tag ``i`` given tag ``j``, in [0, 1].

    Defined as ``cooccurrence(i, j) / tag_count(j)``; 0 when ``j`` is unknown.
    Self-association is 1 because every post containing a tag co-occurs with
    itself.
    """
    n = f.tag_count[j]
    if n == 0:
        return 0.0
    return f.cooccurrence[i, j] / n


def activation(
    base: Optional[float],
    ctx: ContextProfile,
    f: Folksonomy,
    i: str,
) -> float:
    """Total activation of tag ``i``: base level plus contextual priming.

    ``base`` is None for items without usage history, contributing 0. With
    an empty context the result is exactly ``base`` (same float).
    """
    if not ctx:
        return base if base is not None else 0.0
    spread = 0.0
    for j, weight in ctx:
        spread += weight * association_strength(f, j, i)
    return (base if base is not None else 0.0) + spread
