"""Mean opinion score with a normal-approximation 95% confidence interval."""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from typing import Sequence

Z_95 = 1.96


class TooFewSamples(ValueError):
    """At least two ratings are needed for a confidence interval."""


@dataclass(frozen=True)
class RatingSample:
    item_id: str
    score: float

    def __post_init__(self) -> None:
        if not 1.0 <= self.score <= 5.0:
            raise ValueError(f"score must be within [1, 5], got {self.score}")


def mos_summary(samples: Sequence[RatingSample]) -> tuple[float, float, float]:
    """(mean, ci_low, ci_high) using mean +/- 1.96 * s / sqrt(n), with s
    the sample standard deviation (n - 1 denominator)."""
    if len(samples) < 2:
        raise TooFewSamples(f"need >= 2 samples, got {len(samples)}")
    scores = [s.score for s in samples]
    mean = statistics.fmean(scores)
    half_width = Z_95 * statistics.stdev(scores) / math.sqrt(len(scores))
    return mean, mean - half_width, mean + half_width
