"""Mutable-by-copy policy state carried inside a session."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable

from pictutor.core.types import PedagogicalAnchor

MAX_SUPPORT = 3


@dataclass(frozen=True)
class ScaffoldPolicyState:
    """Per-target support levels and failure streaks.

    ``support`` maps each target key to a level in 0..3 (3 = maximum
    support); ``consecutive_failures`` counts unbroken failures per
    target and resets on success. ``phase_entered_at`` records the value
    of ``total_student_turns`` when the current phase began, so phase
    budgets can be measured in turns-within-phase.
    """

    support: dict[str, int] = field(default_factory=dict)
    consecutive_failures: dict[str, int] = field(default_factory=dict)
    total_student_turns: int = 0
    anchor: PedagogicalAnchor = PedagogicalAnchor.WORD_UNDERSTANDING
    phase_entered_at: int = 0

    def __post_init__(self) -> None:
        for key, level in self.support.items():
            if not 0 <= level <= MAX_SUPPORT:
                raise ValueError(f"support level for {key!r} out of range: {level}")
        for key, count in self.consecutive_failures.items():
            if count < 0:
                raise ValueError(f"failure count for {key!r} negative: {count}")

    @classmethod
    def initial(cls, target_keys: Iterable[str]) -> "ScaffoldPolicyState":
        """Start every target at maximum support with a clean failure record."""
        keys = list(dict.fromkeys(target_keys))
        return cls(
            support={k: MAX_SUPPORT for k in keys},
            consecutive_failures={k: 0 for k in keys},
        )

    def with_maps(
        self,
        support: dict[str, int] | None = None,
        consecutive_failures: dict[str, int] | None = None,
        **changes,
    ) -> "ScaffoldPolicyState":
        """Copy with fresh dict instances so callers never share mutable maps."""
        return replace(
            self,
            support=dict(self.support if support is None else support),
            consecutive_failures=dict(
                self.consecutive_failures
                if consecutive_failures is None
                else consecutive_failures
            ),
            **changes,
        )
