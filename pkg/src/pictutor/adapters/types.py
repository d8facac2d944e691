"""Contracts for the four model backends: ASR, utterance generator,
event captioner, and TTS.

Real backends sit behind HTTP (see :mod:`pictutor.adapters.http`);
deterministic in-process mocks live in :mod:`pictutor.adapters.mock`.
Every failure surfaces as a retry-able :class:`AdapterError`; callers
must never mutate session state on failure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Protocol, runtime_checkable

from pictutor.core.types import Language, ScaffoldingType, SessionPhase


class AdapterError(Exception):
    """Base class for backend failures; always safe to retry."""


class AdapterTimeout(AdapterError):
    """The backend did not answer within the per-call deadline."""


class BackendError(AdapterError):
    def __init__(self, code: str, message: str) -> None:
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message


@dataclass(frozen=True)
class WordSpan:
    word: str
    start_ms: int
    end_ms: int
    confidence: float

    def __post_init__(self) -> None:
        if self.start_ms > self.end_ms:
            raise ValueError(f"word span for {self.word!r} ends before it starts")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError("word span confidence out of [0,1]")


@dataclass(frozen=True)
class AsrResult:
    transcript: str
    language: Language
    word_spans: tuple[WordSpan, ...] = ()
    overall_confidence: float = 1.0

    def __post_init__(self) -> None:
        last_end = None
        for span in self.word_spans:
            if last_end is not None and span.start_ms < last_end:
                raise ValueError("word spans overlap or are out of order")
            last_end = span.end_ms
        if not 0.0 <= self.overall_confidence <= 1.0:
            raise ValueError("overall_confidence out of [0,1]")
        if self.language is not Language.ZH and self.word_spans:
            joined = " ".join(s.word for s in self.word_spans)
            if joined != self.transcript:
                raise ValueError("transcript must equal the space-join of span words")


class Voice(str, Enum):
    ADULT_TEACHER = "AdultTeacher"
    CHILD = "Child"


Span = tuple[int, int]


def validate_spans(text: str, spans: tuple[Span, ...]) -> None:
    """Spans must be in bounds, sorted by start, and non-overlapping."""
    last_end = 0
    for start, end in spans:
        if not (0 <= start <= end <= len(text)):
            raise ValueError(f"span ({start}, {end}) out of bounds for text of length {len(text)}")
        if start < last_end:
            raise ValueError("spans overlap or are unsorted")
        last_end = end


@dataclass(frozen=True)
class TtsRequest:
    text: str
    language: Language
    voice: Voice = Voice.ADULT_TEACHER
    highlights: tuple[Span, ...] = ()

    def __post_init__(self) -> None:
        validate_spans(self.text, self.highlights)


@dataclass(frozen=True)
class TtsResult:
    audio_ref: str
    duration_ms: int
    marked_text: str

    def __post_init__(self) -> None:
        if self.duration_ms <= 0:
            raise ValueError("duration_ms must be positive")


@dataclass(frozen=True)
class CaptionResult:
    event_id: str
    caption: str
    keywords: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.caption and not self.keywords:
            raise ValueError("keywords must be non-empty when a caption is present")


def mark_highlights(text: str, spans: tuple[Span, ...]) -> str:
    """Wrap each span in ``<hl>...</hl>``; stripping the tags restores the text."""
    validate_spans(text, spans)
    out = text
    for start, end in reversed(spans):
        out = out[:start] + "<hl>" + out[start:end] + "</hl>" + out[end:]
    return out


def strip_highlight_tags(marked_text: str) -> str:
    return marked_text.replace("<hl>", "").replace("</hl>", "")


@dataclass(frozen=True)
class GeneratorDirective:
    """Structured request for one tutor utterance.

    ``recent_turns`` holds up to the last four (speaker, text) pairs for
    conversational context.
    """

    scaffold: ScaffoldingType
    language: Language
    phase: SessionPhase
    target_word: str | None = None
    recent_turns: tuple[tuple[str, str], ...] = ()

    def to_payload(self) -> dict:
        payload: dict = {
            "scaffold": self.scaffold.value,
            "language": self.language.value,
            "phase": self.phase.value,
            "recent_turns": [
                {"speaker": speaker, "text": text} for speaker, text in self.recent_turns
            ],
        }
        if self.target_word is not None:
            payload["target_word"] = self.target_word
        return payload


@runtime_checkable
class AsrAdapter(Protocol):
    def transcribe(self, audio_ref: str, language: Language) -> AsrResult: ...


@runtime_checkable
class GeneratorAdapter(Protocol):
    def generate(self, directive: GeneratorDirective) -> str: ...


@runtime_checkable
class CaptionerAdapter(Protocol):
    def caption(self, prompt: str) -> CaptionResult: ...


@runtime_checkable
class TtsAdapter(Protocol):
    def synthesize(self, request: TtsRequest) -> TtsResult: ...


@dataclass(frozen=True)
class AdapterSuite:
    """The four backends an engine talks to."""

    asr: AsrAdapter
    generator: GeneratorAdapter
    captioner: CaptionerAdapter
    tts: TtsAdapter
