"""Session lifecycle: the turn history container and its pure transitions.

Sessions are values: every operation returns a new state and never
performs IO. Timestamps and session ids come from the caller (the
service layer) so creation stays deterministic and testable.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, replace
from importlib import resources

from pictutor.core.types import (
    Language,
    ScaffoldingType,
    SessionConfig,
    SessionPhase,
    Speaker,
    StudentProfile,
)
from pictutor.langeval.evaluate import EvaluationResult
from pictutor.scaffolding.state import ScaffoldPolicyState
from pictutor.scene.types import SceneGraph


class SessionError(Exception):
    """Base class for session lifecycle violations."""


class EmptyScene(SessionError):
    """The scene offers no event regions to talk about."""


class SessionClosed(SessionError):
    """No further turns are accepted once a session is closed."""


class NonMonotonicIndex(SessionError):
    """A turn arrived with an index other than last + 1."""


@dataclass(frozen=True)
class TurnRecord:
    """One utterance in the session history.

    Tutor turns carry a scaffold label; student turns carry an
    evaluation; neither may carry the other's field.
    """

    turn_index: int
    speaker: Speaker
    text: str
    timestamp: int
    audio_ref: str | None = None
    scaffold: ScaffoldingType | None = None
    evaluation: EvaluationResult | None = None

    def __post_init__(self) -> None:
        if self.turn_index < 0:
            raise ValueError("turn_index must be non-negative")
        if (self.scaffold is not None) != (self.speaker is Speaker.TUTOR):
            raise ValueError("scaffold present iff speaker is Tutor")
        if self.evaluation is not None and self.speaker is not Speaker.STUDENT:
            raise ValueError("evaluation only allowed on student turns")


@dataclass(frozen=True)
class SessionState:
    session_id: str
    language: Language
    profile: StudentProfile
    scene_id: str
    phase: SessionPhase
    turns: tuple[TurnRecord, ...]
    policy: ScaffoldPolicyState
    max_turns: int


def _opening_questions() -> dict[str, str]:
    text = resources.files("pictutor.data").joinpath("opening_questions.json").read_text(
        encoding="utf-8"
    )
    return json.loads(text)


_OPENING_CACHE: dict[str, str] | None = None


def opening_question(language: Language) -> str:
    """The localized open-ended question that starts every session."""
    global _OPENING_CACHE
    if _OPENING_CACHE is None:
        _OPENING_CACHE = _opening_questions()
    return _OPENING_CACHE[language.value]


def _derived_session_id(
    scene: SceneGraph, language: Language, profile: StudentProfile, config: SessionConfig
) -> str:
    seed = "|".join(
        [
            scene.scene_id,
            language.value,
            profile.student_id,
            str(profile.grade),
            profile.confidence.value,
            profile.attention.value,
            profile.proficiency.value,
            str(config.max_turns),
            str(config.guided_turns),
            str(config.vocab_turns),
            str(config.story_turns),
        ]
    )
    return "s-" + hashlib.sha1(seed.encode("utf-8")).hexdigest()[:12]


def new_session(
    scene: SceneGraph,
    language: Language,
    profile: StudentProfile,
    config: SessionConfig | None = None,
    *,
    session_id: str | None = None,
    now_ms: int = 0,
) -> SessionState:
    """Open a session on ``scene``: full support on every target, one
    opening tutor question in the session language.

    ``session_id`` and ``now_ms`` come from the caller; when omitted the
    id is derived from the inputs, keeping creation deterministic.
    """
    if config is None:
        config = SessionConfig()
    if not scene.events:
        raise EmptyScene(f"scene {scene.scene_id!r} has no event regions")
    target_keys: list[str] = []
    for event in scene.events:
        for entry in scene.targets.get(event.event_id, ()):
            target_keys.append(entry.key)
    opening = TurnRecord(
        turn_index=0,
        speaker=Speaker.TUTOR,
        text=opening_question(language),
        scaffold=ScaffoldingType.QUESTIONING,
        timestamp=now_ms,
    )
    return SessionState(
        session_id=session_id or _derived_session_id(scene, language, profile, config),
        language=language,
        profile=profile,
        scene_id=scene.scene_id,
        phase=SessionPhase.OPENING,
        turns=(opening,),
        policy=ScaffoldPolicyState.initial(target_keys),
        max_turns=config.max_turns,
    )


def append_turn(state: SessionState, turn: TurnRecord) -> SessionState:
    """Append one turn; everything except the history stays unchanged."""
    if state.phase is SessionPhase.CLOSED:
        raise SessionClosed(f"session {state.session_id} is closed")
    expected = len(state.turns)
    if turn.turn_index != expected:
        raise NonMonotonicIndex(
            f"expected turn_index {expected}, got {turn.turn_index}"
        )
    return replace(state, turns=state.turns + (turn,))
