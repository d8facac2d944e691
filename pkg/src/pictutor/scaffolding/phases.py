"""Forward-only phase progression driven by turn counts and fading."""

from __future__ import annotations

from dataclasses import replace

from pictutor.core.types import PedagogicalAnchor, SessionConfig, SessionPhase
from pictutor.core.session import SessionClosed, SessionState
from pictutor.scaffolding.state import ScaffoldPolicyState

PHASE_ANCHORS: dict[SessionPhase, PedagogicalAnchor] = {
    SessionPhase.OPENING: PedagogicalAnchor.WORD_UNDERSTANDING,
    SessionPhase.GUIDED_DESCRIPTION: PedagogicalAnchor.WORD_UNDERSTANDING,
    SessionPhase.VOCABULARY_ENRICHMENT: PedagogicalAnchor.SENTENCE_CONSTRUCTION,
    SessionPhase.STORY_CREATION: PedagogicalAnchor.STORY_CREATION,
}


def next_phase(state: SessionState, config: SessionConfig | None = None) -> SessionPhase:
    """The phase the session should hold after the latest student turn.

    Hitting ``max_turns`` closes the session from any phase. Guided
    description ends early once every target has faded to level 0;
    otherwise each teaching phase ends when its turn budget is spent.
    """
    if state.phase is SessionPhase.CLOSED:
        raise SessionClosed(f"session {state.session_id} is closed")
    if config is None:
        config = SessionConfig(max_turns=state.max_turns)
    policy = state.policy
    if policy.total_student_turns >= state.max_turns:
        return SessionPhase.CLOSED
    in_phase = policy.total_student_turns - policy.phase_entered_at
    if state.phase is SessionPhase.OPENING:
        if policy.total_student_turns >= 1:
            return SessionPhase.GUIDED_DESCRIPTION
        return SessionPhase.OPENING
    if state.phase is SessionPhase.GUIDED_DESCRIPTION:
        all_faded = all(level == 0 for level in policy.support.values())
        if all_faded or in_phase >= config.guided_turns:
            return SessionPhase.VOCABULARY_ENRICHMENT
        return SessionPhase.GUIDED_DESCRIPTION
    if state.phase is SessionPhase.VOCABULARY_ENRICHMENT:
        if in_phase >= config.vocab_turns:
            return SessionPhase.STORY_CREATION
        return SessionPhase.VOCABULARY_ENRICHMENT
    if in_phase >= config.story_turns:
        return SessionPhase.CLOSED
    return SessionPhase.STORY_CREATION


def after_transition(
    policy: ScaffoldPolicyState, old: SessionPhase, new: SessionPhase
) -> ScaffoldPolicyState:
    """Update anchor and phase clock when the phase changes.

    The opening student turn counts toward the guided-description budget,
    so that transition keeps the clock at zero.
    """
    if new == old:
        return policy
    changes: dict = {}
    anchor = PHASE_ANCHORS.get(new)
    if anchor is not None:
        changes["anchor"] = anchor
    keeps_clock = old is SessionPhase.OPENING and new is SessionPhase.GUIDED_DESCRIPTION
    if not keeps_clock:
        changes["phase_entered_at"] = policy.total_student_turns
    if not changes:
        return policy
    return policy.with_maps(**changes)
