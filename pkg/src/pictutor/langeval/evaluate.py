"""Assessment of a student transcript against target vocabulary.

Produces the per-turn :class:`EvaluationResult` consumed by the
scaffolding policy: keyword coverage, general-vs-specific vocabulary
check, off-topic detection, and a sentence-level proxy for grades 1-2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import AbstractSet, Iterable, Sequence

from pictutor.core.types import Affect, Language, PedagogicalAnchor
from pictutor.langeval.lexicon import (
    EMPTY_HIERARCHY,
    Generality,
    LexiconEntry,
    VocabularyHierarchy,
)
from pictutor.langeval.tokens import tokenize


@dataclass(frozen=True)
class EvaluationResult:
    """Outcome of evaluating one student turn.

    ``coverage`` is the fraction of targets matched (1.0 when there were
    no targets). ``vague_targets`` lists, in target order, the matched
    General targets that have Specific children but were matched only via
    their own surface forms; ``specificity_ok`` is true iff that list is
    empty.
    """

    coverage: float
    matched_targets: frozenset[str]
    specificity_ok: bool
    off_topic: bool
    affect: Affect = Affect.NEUTRAL
    sentence_ok: bool = False
    vague_targets: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not 0.0 <= self.coverage <= 1.0:
            raise ValueError(f"coverage out of range: {self.coverage}")


def _target_surfaces(target: LexiconEntry, hierarchy: VocabularyHierarchy) -> set[str]:
    """Own surface forms plus every Specific child's, lowercased."""
    forms = {s.lower() for s in target.surface_forms}
    for child in hierarchy.child_entries(target.key):
        forms.update(s.lower() for s in child.surface_forms)
    return forms


def keyword_coverage(
    tokens: Sequence[str],
    targets: Sequence[LexiconEntry],
    hierarchy: VocabularyHierarchy = EMPTY_HIERARCHY,
) -> tuple[float, frozenset[str]]:
    """Fraction of targets whose surface forms (or a child's) appear in tokens."""
    if not targets:
        return 1.0, frozenset()
    token_set = set(tokens)
    matched = frozenset(
        t.key for t in targets if _target_surfaces(t, hierarchy) & token_set
    )
    return len(matched) / len(targets), matched


def _vague_generals(
    tokens: Sequence[str],
    targets: Sequence[LexiconEntry],
    hierarchy: VocabularyHierarchy,
) -> tuple[str, ...]:
    """Matched General targets hit only through their own forms despite having children."""
    token_set = set(tokens)
    vague: list[str] = []
    for target in targets:
        if target.generality is not Generality.GENERAL:
            continue
        children = hierarchy.child_entries(target.key)
        if not children:
            continue
        own_hit = any(s.lower() in token_set for s in target.surface_forms)
        child_hit = any(
            s.lower() in token_set for child in children for s in child.surface_forms
        )
        if own_hit and not child_hit:
            vague.append(target.key)
    return tuple(vague)


def specificity_check(
    tokens: Sequence[str],
    targets: Sequence[LexiconEntry],
    hierarchy: VocabularyHierarchy,
) -> bool:
    return not _vague_generals(tokens, targets, hierarchy)


def detect_off_topic(
    tokens: Sequence[str],
    scene_keywords: AbstractSet[str],
    smalltalk: AbstractSet[str] = frozenset(),
) -> bool:
    """True iff a non-empty turn shares no token with the scene vocabulary.

    A single-token yes/no/greeting from the smalltalk allowlist is never
    off-topic, and silence is not off-topic (it shows up as low coverage).
    """
    if not tokens:
        return False
    if len(tokens) == 1 and tokens[0] in smalltalk:
        return False
    vocab = {k.lower() for k in scene_keywords}
    return all(t not in vocab for t in tokens)


def assess(
    transcript: str,
    language: Language,
    targets: Sequence[LexiconEntry],
    hierarchy: VocabularyHierarchy = EMPTY_HIERARCHY,
    anchor: PedagogicalAnchor = PedagogicalAnchor.WORD_UNDERSTANDING,
    affect_hint: Affect = Affect.NEUTRAL,
    *,
    scene_keywords: AbstractSet[str] | None = None,
    smalltalk: AbstractSet[str] = frozenset(),
) -> EvaluationResult:
    """Full per-turn evaluation, composing the checks above.

    ``scene_keywords`` defaults to the targets' surface forms (children
    included); pass the scene-wide vocabulary for a stricter on-topic set.
    """
    surfaces: set[str] = set()
    for target in targets:
        surfaces |= _target_surfaces(target, hierarchy)
    tokens = tokenize(transcript, language, surfaces)
    coverage, matched = keyword_coverage(tokens, targets, hierarchy)
    vague = _vague_generals(tokens, targets, hierarchy)
    keywords = scene_keywords if scene_keywords is not None else surfaces
    off_topic = detect_off_topic(tokens, keywords, smalltalk)
    if anchor is PedagogicalAnchor.SENTENCE_CONSTRUCTION:
        sentence_ok = len(tokens) >= 3 and coverage > 0
    else:
        sentence_ok = coverage > 0
    return EvaluationResult(
        coverage=coverage,
        matched_targets=matched,
        specificity_ok=not vague,
        off_topic=off_topic,
        affect=affect_hint,
        sentence_ok=sentence_ok,
        vague_targets=vague,
    )
