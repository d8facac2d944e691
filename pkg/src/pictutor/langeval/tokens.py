"""Deterministic, dependency-free tokenization for the four session languages."""

from __future__ import annotations

import unicodedata
from itertools import groupby
from typing import Iterable

from pictutor.core.types import Language


def _is_token_char(ch: str) -> bool:
    # Combining marks (category M*) must stay inside words: Tamil vowel
    # signs and virama are not alphanumeric on their own.
    return ch.isalnum() or unicodedata.category(ch).startswith("M")


def _greedy_surface_matches(text: str, surfaces: Iterable[str]) -> list[str]:
    """Left-to-right longest-match scan of lowercased surface forms."""
    forms = sorted({s.lower() for s in surfaces if s}, key=lambda f: (-len(f), f))
    if not forms:
        return []
    out: list[str] = []
    i = 0
    while i < len(text):
        for form in forms:
            if text.startswith(form, i):
                out.append(form)
                i += len(form)
                break
        else:
            i += 1
    return out


def tokenize(text: str, language: Language, surfaces: Iterable[str] = ()) -> list[str]:
    """Split ``text`` into lowercase tokens.

    EN/MS/TA: maximal runs of word characters (whitespace and punctuation
    separate tokens). ZH: every individual word character becomes a token,
    and greedy longest matches against ``surfaces`` (the lexicon's surface
    forms) are appended so multi-character vocabulary is visible to
    set-based matching.
    """
    lowered = text.lower()
    if language is Language.ZH:
        chars = [ch for ch in lowered if _is_token_char(ch)]
        return chars + _greedy_surface_matches(lowered, surfaces)
    tokens: list[str] = []
    for is_word, run in groupby(lowered, key=_is_token_char):
        if is_word:
            tokens.append("".join(run))
    return tokens
