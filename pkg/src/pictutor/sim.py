"""Scripted mock students for end-to-end exercising and analytics demos.

Two responder scripts: an accurate one that names every remaining target
with a specific word, and an inaccurate one that answers partially,
drifts off topic, and occasionally signals low confidence. Sessions run
through the real engine, so the generated logs are ordinary session
logs ready for the scaffolding analytics.
"""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from pictutor.core.types import (
    Affect,
    Attention,
    Confidence,
    Language,
    Proficiency,
    SessionPhase,
    StudentProfile,
)
from pictutor.langeval.lexicon import Generality, Lexicon, LexiconEntry
from pictutor.metrics.scaffolds import Cohort, UtteranceLabel
from pictutor.service.engine import TutorEngine

Responder = Callable[[int, tuple[LexiconEntry, ...], random.Random], tuple[str, Affect]]


def accurate_responder(
    turn_no: int, targets: tuple[LexiconEntry, ...], rng: random.Random
) -> tuple[str, Affect]:
    """Names every target, preferring a specific child word over a general one."""
    words: list[str] = []
    for entry in targets:
        word = entry.surface_forms[0]
        words.append(word)
    phrase = " and the ".join(dict.fromkeys(words)) or "picture"
    return f"i can see the {phrase} here", Affect.NEUTRAL


def inaccurate_responder(
    turn_no: int, targets: tuple[LexiconEntry, ...], rng: random.Random
) -> tuple[str, Affect]:
    """Partial, vague, or off-task answers with occasional low confidence."""
    first = targets[0].surface_forms[0] if targets else "picture"
    choices = [
        (f"um the {first}", Affect.NEUTRAL),
        ("i dont know", Affect.NEUTRAL),
        (f"the {first}", Affect.LOW_CONFIDENCE),
        ("something", Affect.NEUTRAL),
    ]
    return choices[rng.randrange(len(choices))]


@dataclass(frozen=True)
class SimResult:
    session_id: str
    cohort: Cohort
    labels: tuple[UtteranceLabel, ...]


def _specific_first_targets(
    lexicon: Lexicon | None, targets: tuple[LexiconEntry, ...]
) -> tuple[LexiconEntry, ...]:
    """Reorder each general-with-children target behind its first child so
    the accurate responder leads with specific vocabulary."""
    if lexicon is None:
        return targets
    out: list[LexiconEntry] = []
    for entry in targets:
        children = lexicon.hierarchy.child_entries(entry.key)
        if entry.generality is Generality.GENERAL and children:
            out.append(children[0])
        else:
            out.append(entry)
    return tuple(out)


def run_session(
    engine: TutorEngine,
    scene_id: str,
    responder: Responder,
    cohort: Cohort,
    profile: StudentProfile,
    seed: int,
    language: Language = Language.EN,
    max_turns: int = 10,
) -> SimResult:
    """Drive one session until it closes; returns the tutor-move labels."""
    rng = random.Random(seed)
    created = engine.create_session(scene_id, language, profile, max_turns=max_turns)
    session_id = created.session_id
    labels: list[UtteranceLabel] = []
    lexicon = engine._lexicons.get(language)
    for turn_no in range(max_turns):
        state = engine.get_session(session_id)
        if state.phase is SessionPhase.CLOSED:
            break
        runtime = engine._runtime(session_id)
        event = engine._active_event(runtime)
        targets = _specific_first_targets(
            lexicon, runtime.targets.get(event.event_id, ())
        )
        text, affect = responder(turn_no, targets, rng)
        outcome = engine.post_turn(session_id, text=text, affect_hint=affect)
        if outcome.phase is not SessionPhase.CLOSED:
            labels.append(UtteranceLabel(session_id, cohort, outcome.action.scaffold))
    return SimResult(session_id=session_id, cohort=cohort, labels=tuple(labels))


ACCURATE_PROFILE = StudentProfile(
    "sim-accurate", 2, Confidence.HIGH, Attention.STEADY, Proficiency.INTERMEDIATE
)
INACCURATE_PROFILE = StudentProfile(
    "sim-inaccurate", 1, Confidence.LOW, Attention.DISTRACTIBLE, Proficiency.BEGINNER
)


def simulate_cohorts(
    engine: TutorEngine,
    sessions_per_cohort: int,
    seed: int = 7,
    scene_id: str = "pool",
    max_turns: int = 10,
) -> list[SimResult]:
    """Accurate responders form the high-performing cohort, inaccurate the low."""
    results: list[SimResult] = []
    for i in range(sessions_per_cohort):
        results.append(
            run_session(
                engine,
                scene_id,
                accurate_responder,
                Cohort.HIGH_PERFORMING,
                ACCURATE_PROFILE,
                seed=seed + i,
                max_turns=max_turns,
            )
        )
        results.append(
            run_session(
                engine,
                scene_id,
                inaccurate_responder,
                Cohort.LOW_PERFORMING,
                INACCURATE_PROFILE,
                seed=seed + 10_000 + i,
                max_turns=max_turns,
            )
        )
    return results


def write_cohort_csv(results: list[SimResult], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["session_id", "cohort"])
        for result in results:
            writer.writerow([result.session_id, result.cohort.value])
