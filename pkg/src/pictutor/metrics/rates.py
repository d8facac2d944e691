"""Word and character error rates.

WER runs over language-aware tokens (Mandarin falls back to individual
characters); CER runs over whitespace-normalized characters. Rates can
exceed 1.0 when the hypothesis is much longer than the reference.
"""

from __future__ import annotations

from pictutor.core.types import Language
from pictutor.langeval.tokens import tokenize
from pictutor.metrics.distance import edit_distance


class EmptyReference(ValueError):
    """The reference is empty after tokenization or normalization."""


def wer(reference: str, hypothesis: str, language: Language = Language.EN) -> float:
    ref_tokens = tokenize(reference, language)
    if not ref_tokens:
        raise EmptyReference("reference has no tokens")
    hyp_tokens = tokenize(hypothesis, language)
    return edit_distance(ref_tokens, hyp_tokens) / len(ref_tokens)


def _normalize_chars(text: str) -> list[str]:
    return list(" ".join(text.split()))


def cer(reference: str, hypothesis: str) -> float:
    ref_chars = _normalize_chars(reference)
    if not ref_chars:
        raise EmptyReference("reference has no characters")
    return edit_distance(ref_chars, _normalize_chars(hypothesis)) / len(ref_chars)
