"""Target vocabulary: lexicon entries and the general/specific hierarchy."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from pictutor.core.types import Language


class Generality(str, Enum):
    GENERAL = "General"
    SPECIFIC = "Specific"


class LexiconFormatError(ValueError):
    """Raised for a malformed lexicon file or an inconsistent hierarchy."""


@dataclass(frozen=True)
class LexiconEntry:
    """One vocabulary item.

    ``key`` is the canonical lemma used everywhere as the target id.
    ``surface_forms`` lists the inflections that count as a match, in
    authoring order; the first one is the preferred display form.
    Specific entries name their General parent via ``parent_key``.
    """

    key: str
    language: Language
    surface_forms: tuple[str, ...]
    generality: Generality = Generality.GENERAL
    parent_key: str | None = None

    def __post_init__(self) -> None:
        if not self.surface_forms:
            raise LexiconFormatError(f"entry {self.key!r} has no surface forms")
        if self.generality is Generality.SPECIFIC and self.parent_key is None:
            raise LexiconFormatError(f"specific entry {self.key!r} lacks parent_key")
        if self.generality is Generality.GENERAL and self.parent_key is not None:
            raise LexiconFormatError(f"general entry {self.key!r} must not have a parent")


@dataclass(frozen=True)
class VocabularyHierarchy:
    """Entries keyed by lemma plus the derived general -> specifics map.

    ``children`` is always the exact inverse of the entries' parent links;
    build instances via :meth:`from_entries` so that stays true.
    """

    entries: dict[str, LexiconEntry]
    children: dict[str, tuple[str, ...]]

    @classmethod
    def from_entries(cls, entries: list[LexiconEntry]) -> "VocabularyHierarchy":
        by_key: dict[str, LexiconEntry] = {}
        for entry in entries:
            if entry.key in by_key:
                raise LexiconFormatError(f"duplicate entry key {entry.key!r}")
            by_key[entry.key] = entry
        children: dict[str, list[str]] = {}
        for entry in entries:
            if entry.parent_key is None:
                continue
            parent = by_key.get(entry.parent_key)
            if parent is None:
                raise LexiconFormatError(
                    f"entry {entry.key!r} references unknown parent {entry.parent_key!r}"
                )
            if parent.generality is not Generality.GENERAL:
                raise LexiconFormatError(
                    f"parent of {entry.key!r} must be General, got {parent.generality}"
                )
            children.setdefault(entry.parent_key, []).append(entry.key)
        return cls(entries=by_key, children={k: tuple(v) for k, v in children.items()})

    def child_entries(self, key: str) -> tuple[LexiconEntry, ...]:
        return tuple(self.entries[c] for c in self.children.get(key, ()))

    def surfaces_of(self, key: str, include_children: bool = False) -> tuple[str, ...]:
        entry = self.entries[key]
        forms = list(entry.surface_forms)
        if include_children:
            for child in self.child_entries(key):
                forms.extend(child.surface_forms)
        return tuple(forms)


EMPTY_HIERARCHY = VocabularyHierarchy(entries={}, children={})


@dataclass(frozen=True)
class Lexicon:
    """A per-language lexicon file: hierarchy plus smalltalk/stopword lists."""

    language: Language
    hierarchy: VocabularyHierarchy
    smalltalk: frozenset[str] = frozenset()
    stopwords: frozenset[str] = frozenset()

    @property
    def entries(self) -> dict[str, LexiconEntry]:
        return self.hierarchy.entries

    def all_surfaces(self) -> frozenset[str]:
        """Every surface form of every entry, lowercased."""
        forms: set[str] = set()
        for entry in self.entries.values():
            forms.update(s.lower() for s in entry.surface_forms)
        return frozenset(forms)


def load_lexicon(path: str | Path) -> Lexicon:
    """Load a lexicon JSON file.

    Schema: ``{language, entries: [{key, surface_forms, generality,
    parent_key?}], smalltalk?: [...], stopwords?: [...]}``.
    """
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    try:
        language = Language(raw["language"])
        entries = [
            LexiconEntry(
                key=item["key"],
                language=language,
                surface_forms=tuple(item["surface_forms"]),
                generality=Generality(item.get("generality", "General")),
                parent_key=item.get("parent_key"),
            )
            for item in raw["entries"]
        ]
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, LexiconFormatError):
            raise
        raise LexiconFormatError(f"malformed lexicon file {path}: {exc}") from exc
    return Lexicon(
        language=language,
        hierarchy=VocabularyHierarchy.from_entries(entries),
        smalltalk=frozenset(s.lower() for s in raw.get("smalltalk", [])),
        stopwords=frozenset(s.lower() for s in raw.get("stopwords", [])),
    )
