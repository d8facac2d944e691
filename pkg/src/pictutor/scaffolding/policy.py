"""Scaffold selection and fading.

The decision table runs top-down, first match wins; safety rows
(redirection, frustration relief) outrank the pedagogy rows. Support
fades one level per success and escalates after repeated failures, so
learners move toward producing target words unaided.
"""

from __future__ import annotations

from typing import Sequence

from pictutor.core.types import Affect, Confidence, ScaffoldingType, StudentProfile
from pictutor.langeval.evaluate import EvaluationResult
from pictutor.scaffolding.state import MAX_SUPPORT, ScaffoldPolicyState

MODELING_FAILURE_THRESHOLD = 3
ESCALATE_AT_FAILURES = 2
LOW_SUPPORT_MAX = 1


class UnknownTarget(KeyError):
    """The target key is not tracked by this policy."""


def apply_fading(
    policy: ScaffoldPolicyState, target_key: str, success: bool
) -> ScaffoldPolicyState:
    """One fading step for one target.

    Success drops the support level by one (floor 0) and clears the
    failure streak; failure increments the streak and, exactly when the
    streak reaches 2, raises the level by one (ceiling 3).
    """
    if target_key not in policy.support:
        raise UnknownTarget(target_key)
    support = dict(policy.support)
    failures = dict(policy.consecutive_failures)
    if success:
        support[target_key] = max(0, support[target_key] - 1)
        failures[target_key] = 0
    else:
        failures[target_key] = failures.get(target_key, 0) + 1
        if failures[target_key] == ESCALATE_AT_FAILURES:
            support[target_key] = min(MAX_SUPPORT, support[target_key] + 1)
    return policy.with_maps(support=support, consecutive_failures=failures)


def _active_keys(
    policy: ScaffoldPolicyState, active_targets: Sequence[str] | None
) -> list[str]:
    if active_targets is None:
        return list(policy.support)
    return [k for k in active_targets if k in policy.support]


def select_scaffold(
    evaluation: EvaluationResult,
    policy: ScaffoldPolicyState,
    profile: StudentProfile,
    active_targets: Sequence[str] | None = None,
) -> tuple[ScaffoldingType, str | None, ScaffoldPolicyState]:
    """Pick the next tutoring move for one student turn.

    ``active_targets`` restricts attention to the targets the turn was
    evaluated against (defaults to every tracked target). The returned
    policy has ``total_student_turns`` advanced by one and fading /
    failure bookkeeping applied.

    Decision order: off-topic redirection; frustration or a stuck target
    (3+ consecutive failures) -> modeling; low confidence -> encouragement;
    full specific coverage -> feedback or explanation with fading; full
    but vague coverage -> questioning for a more specific word; partial
    coverage -> hints while support is high, questions otherwise.
    """
    new = policy.with_maps(total_student_turns=policy.total_student_turns + 1)
    keys = _active_keys(new, active_targets)
    unmatched = [k for k in keys if k not in evaluation.matched_targets]
    active = unmatched[0] if unmatched else None

    if evaluation.off_topic:
        return ScaffoldingType.INSTRUCTING, None, new

    stuck = (
        active is not None
        and new.consecutive_failures.get(active, 0) >= MODELING_FAILURE_THRESHOLD
    )
    if evaluation.affect is Affect.FRUSTRATED or stuck:
        target = active
        if target is None and keys:
            target = max(keys, key=lambda k: new.consecutive_failures.get(k, 0))
        if target is not None:
            support = dict(new.support)
            failures = dict(new.consecutive_failures)
            support[target] = MAX_SUPPORT
            failures[target] = 0
            new = new.with_maps(support=support, consecutive_failures=failures)
        return ScaffoldingType.MODELING, target, new

    if evaluation.affect is Affect.LOW_CONFIDENCE and profile.confidence is Confidence.LOW:
        return ScaffoldingType.SOCIAL_EMOTIONAL, None, new

    if evaluation.coverage == 1.0 and evaluation.specificity_ok:
        matched = [k for k in keys if k in evaluation.matched_targets]
        peak = max((new.support[k] for k in matched), default=0)
        move = (
            ScaffoldingType.FEEDING_BACK
            if peak <= LOW_SUPPORT_MAX
            else ScaffoldingType.EXPLAINING
        )
        target = next((k for k in matched if new.support[k] == peak), None)
        for key in matched:
            new = apply_fading(new, key, success=True)
        return move, target, new

    if evaluation.coverage == 1.0:
        # Covered, but only through general terms: push for a specific word.
        target = next((k for k in evaluation.vague_targets if k in new.support), None)
        if target is None:
            target = evaluation.vague_targets[0] if evaluation.vague_targets else None
        if target in new.support:
            new = apply_fading(new, target, success=False)
        return ScaffoldingType.QUESTIONING, target, new

    if active is not None and new.support.get(active, 0) >= 2:
        new = apply_fading(new, active, success=False)
        return ScaffoldingType.HINTS, active, new

    if active is not None:
        new = apply_fading(new, active, success=False)
    return ScaffoldingType.QUESTIONING, active, new
