"""Turn a selected scaffold into a concrete tutor action."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from pictutor.adapters.types import (
    AdapterError,
    GeneratorAdapter,
    GeneratorDirective,
    Span,
    validate_spans,
)
from pictutor.core.types import Language, ScaffoldingType, SessionPhase
from pictutor.core.session import TurnRecord
from pictutor.langeval.lexicon import LexiconEntry

RECENT_TURN_WINDOW = 4


class GeneratorUnavailable(AdapterError):
    """The utterance generator failed; the turn can be retried."""


@dataclass(frozen=True)
class TutorAction:
    """One tutor move: wording, scaffold label, keyword highlight spans,
    and the phase the session enters after this move."""

    text: str
    scaffold: ScaffoldingType
    highlights: tuple[Span, ...]
    phase_after: SessionPhase
    target_key: str | None = None

    def __post_init__(self) -> None:
        validate_spans(self.text, self.highlights)


def find_highlight_spans(text: str, word: str) -> tuple[Span, ...]:
    """Case-insensitive, non-overlapping spans of every occurrence of ``word``."""
    if not word:
        return ()
    haystack = text.lower()
    needle = word.lower()
    spans: list[Span] = []
    start = 0
    while True:
        index = haystack.find(needle, start)
        if index < 0:
            break
        spans.append((index, index + len(needle)))
        start = index + len(needle)
    return tuple(spans)


def render_action(
    scaffold: ScaffoldingType,
    target: LexiconEntry | None,
    phase: SessionPhase,
    language: Language,
    generator: GeneratorAdapter,
    recent_turns: Sequence[TurnRecord] = (),
) -> TutorAction:
    """Ask the generator for wording and mark every target-word occurrence.

    ``phase`` is the phase the session enters after this action (the
    caller computes it via ``next_phase``). Generator failures surface as
    :class:`GeneratorUnavailable` so the service can retry.
    """
    target_word = target.surface_forms[0] if target is not None else None
    directive = GeneratorDirective(
        scaffold=scaffold,
        language=language,
        phase=phase,
        target_word=target_word,
        recent_turns=tuple(
            (turn.speaker.value, turn.text) for turn in recent_turns[-RECENT_TURN_WINDOW:]
        ),
    )
    try:
        text = generator.generate(directive)
    except AdapterError as exc:
        raise GeneratorUnavailable(str(exc)) from exc
    highlights = find_highlight_spans(text, target_word) if target_word else ()
    return TutorAction(
        text=text,
        scaffold=scaffold,
        highlights=highlights,
        phase_after=phase,
        target_key=target.key if target is not None else None,
    )
