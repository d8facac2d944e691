"""Target vocabulary extraction: map event member labels into the lexicon."""

from __future__ import annotations

from pictutor.langeval.lexicon import LexiconEntry, VocabularyHierarchy
from pictutor.scene.types import SceneGraph


def _matches_label(entry: LexiconEntry, labels: set[str]) -> bool:
    if entry.key.lower() in labels:
        return True
    return any(s.lower() in labels for s in entry.surface_forms)


def extract_targets(
    scene: SceneGraph, lexicon: VocabularyHierarchy
) -> dict[str, tuple[LexiconEntry, ...]]:
    """Per event: lexicon entries matching member labels, plus their
    Specific hyponyms, in lexicon order. Labels absent from the lexicon
    are skipped.
    """
    out: dict[str, tuple[LexiconEntry, ...]] = {}
    for event in scene.events:
        labels = {
            d.label.lower() for d in scene.detections if d.det_id in event.member_ids
        }
        matched = {
            key
            for key, entry in lexicon.entries.items()
            if _matches_label(entry, labels)
        }
        rows = [
            entry
            for key, entry in lexicon.entries.items()
            if key in matched or (entry.parent_key is not None and entry.parent_key in matched)
        ]
        out[event.event_id] = tuple(rows)
    return out
