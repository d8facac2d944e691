"""Shared domain vocabulary for tutoring sessions.

Everything here is plain data: enums whose serialized names are stable
strings (they appear verbatim in session logs and analytics reports),
plus the student profile and per-session configuration records.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class Language(str, Enum):
    EN = "EN"
    ZH = "ZH"
    MS = "MS"
    TA = "TA"


class ScaffoldingType(str, Enum):
    """The seven tutoring move categories used in logs and analytics."""

    FEEDING_BACK = "FeedingBack"
    HINTS = "Hints"
    INSTRUCTING = "Instructing"
    EXPLAINING = "Explaining"
    MODELING = "Modeling"
    QUESTIONING = "Questioning"
    SOCIAL_EMOTIONAL = "SocialEmotional"


class PedagogicalAnchor(str, Enum):
    """High-level learning objective active during a session phase."""

    WORD_UNDERSTANDING = "WordUnderstanding"
    SENTENCE_CONSTRUCTION = "SentenceConstruction"
    STORY_CREATION = "StoryCreation"


class SessionPhase(str, Enum):
    """Session phases; transitions only ever move forward."""

    OPENING = "Opening"
    GUIDED_DESCRIPTION = "GuidedDescription"
    VOCABULARY_ENRICHMENT = "VocabularyEnrichment"
    STORY_CREATION = "StoryCreation"
    CLOSED = "Closed"


# Forward order used to reject backward transitions.
PHASE_ORDER: tuple[SessionPhase, ...] = (
    SessionPhase.OPENING,
    SessionPhase.GUIDED_DESCRIPTION,
    SessionPhase.VOCABULARY_ENRICHMENT,
    SessionPhase.STORY_CREATION,
    SessionPhase.CLOSED,
)


class Speaker(str, Enum):
    STUDENT = "Student"
    TUTOR = "Tutor"


class Confidence(str, Enum):
    LOW = "Low"
    MEDIUM = "Medium"
    HIGH = "High"


class Attention(str, Enum):
    DISTRACTIBLE = "Distractible"
    STEADY = "Steady"


class Proficiency(str, Enum):
    BEGINNER = "Beginner"
    INTERMEDIATE = "Intermediate"
    ADVANCED = "Advanced"


class Affect(str, Enum):
    """Affect signal attached to a student turn (supplied, not inferred)."""

    NEUTRAL = "Neutral"
    LOW_CONFIDENCE = "LowConfidence"
    FRUSTRATED = "Frustrated"


@dataclass(frozen=True)
class StudentProfile:
    """Static learner characteristics captured at session start."""

    student_id: str
    grade: int
    confidence: Confidence
    attention: Attention
    proficiency: Proficiency

    def __post_init__(self) -> None:
        if self.grade not in (1, 2):
            raise ValueError(f"grade must be 1 or 2, got {self.grade}")


@dataclass(frozen=True)
class SessionConfig:
    """Turn limits for one session.

    ``max_turns`` caps student turns for the whole session; the three
    budgets cap student turns spent inside each teaching phase.
    """

    max_turns: int = 30
    guided_turns: int = 12
    vocab_turns: int = 6
    story_turns: int = 6

    def __post_init__(self) -> None:
        if self.max_turns < 1:
            raise ValueError("max_turns must be >= 1")
        for name in ("guided_turns", "vocab_turns", "story_turns"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
