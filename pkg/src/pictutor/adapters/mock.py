"""Deterministic in-process backends for tests and demo mode.

All mocks are pure functions of their inputs: identical requests always
produce identical results, so end-to-end tests run with zero model
dependencies.
"""

from __future__ import annotations

import hashlib
import json
import wave
from importlib import resources
from pathlib import Path

from pictutor.adapters.types import (
    AdapterSuite,
    AsrResult,
    BackendError,
    CaptionResult,
    GeneratorDirective,
    TtsRequest,
    TtsResult,
    WordSpan,
    mark_highlights,
)
from pictutor.core.types import Language, SessionPhase

MS_PER_CHAR = 60
RAW_PREFIX = "raw:"


def _load_data(name: str) -> dict:
    text = resources.files("pictutor.data").joinpath(name).read_text(encoding="utf-8")
    return json.loads(text)


class MockAsr:
    """Resolves fixture audio ids to canned transcripts.

    ``fixture:<name>`` ids come from the bundled table (plus any extras
    passed in); ``raw:<text>`` ids pass the text through, which lets the
    demo exercise the audio path without real audio.
    """

    def __init__(self, extra_fixtures: dict[str, str] | None = None) -> None:
        self._fixtures: dict[str, str] = dict(_load_data("asr_fixtures.json"))
        if extra_fixtures:
            self._fixtures.update(extra_fixtures)

    def transcribe(self, audio_ref: str, language: Language) -> AsrResult:
        if audio_ref.startswith(RAW_PREFIX):
            transcript = audio_ref[len(RAW_PREFIX):]
        elif audio_ref in self._fixtures:
            transcript = self._fixtures[audio_ref]
        else:
            raise BackendError("unknown_audio", f"no fixture transcript for {audio_ref!r}")
        spans = []
        cursor = 0
        for word in transcript.split():
            duration = MS_PER_CHAR * len(word)
            spans.append(WordSpan(word, cursor, cursor + duration, 0.95))
            cursor += duration
        return AsrResult(
            transcript=" ".join(s.word for s in spans),
            language=language,
            word_spans=tuple(spans),
            overall_confidence=0.95,
        )


class MockGenerator:
    """Template-based tutor utterances for all scaffold types and languages."""

    def __init__(self) -> None:
        self._templates: dict = _load_data("generator_templates.json")

    def generate(self, directive: GeneratorDirective) -> str:
        per_language = self._templates.get(directive.language.value)
        if per_language is None:
            raise BackendError("unknown_language", directive.language.value)
        if directive.phase is SessionPhase.CLOSED:
            return per_language["closing"]
        forms = per_language[directive.scaffold.value]
        if directive.target_word is not None and "target" in forms:
            return forms["target"].replace("{target}", directive.target_word)
        return forms["plain"]


class MockCaptioner:
    """Builds a caption from the labels named in the prompt."""

    def caption(self, prompt: str) -> CaptionResult:
        event_id = ""
        labels: list[str] = []
        for line in prompt.splitlines():
            if line.startswith("Event ") and " members: " in line:
                head, _, tail = line.partition(" members: ")
                event_id = head[len("Event "):].strip()
                labels = [label.strip() for label in tail.split(",") if label.strip()]
                break
        if labels:
            if len(labels) == 1:
                described = labels[0]
            else:
                described = ", ".join(labels[:-1]) + " and " + labels[-1]
            caption = f"In this part of the picture there is {described}."
        else:
            caption = "A part of the picture."
            labels = ["picture"]
        return CaptionResult(event_id=event_id, caption=caption, keywords=tuple(labels))


class MockTts:
    """Pretend synthesis: 60 ms per character, tagged highlight markup.

    When ``media_dir`` is given, a silent 16 kHz mono WAV of the computed
    duration is written under the audio ref so media serving and browser
    playback work end to end.
    """

    def __init__(self, media_dir: str | Path | None = None) -> None:
        self._media_dir = Path(media_dir) if media_dir is not None else None

    def synthesize(self, request: TtsRequest) -> TtsResult:
        digest = hashlib.sha1(
            f"{request.text}|{request.language.value}|{request.voice.value}".encode("utf-8")
        ).hexdigest()[:16]
        audio_ref = f"tts-{digest}.wav"
        duration_ms = max(1, MS_PER_CHAR * len(request.text))
        if self._media_dir is not None:
            self._write_silence(self._media_dir / audio_ref, duration_ms)
        return TtsResult(
            audio_ref=audio_ref,
            duration_ms=duration_ms,
            marked_text=mark_highlights(request.text, request.highlights),
        )

    @staticmethod
    def _write_silence(path: Path, duration_ms: int) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        frames = int(16000 * duration_ms / 1000)
        with wave.open(str(path), "wb") as wav:
            wav.setnchannels(1)
            wav.setsampwidth(2)
            wav.setframerate(16000)
            wav.writeframes(b"\x00\x00" * frames)


def mock_suite(media_dir: str | Path | None = None) -> AdapterSuite:
    return AdapterSuite(
        asr=MockAsr(),
        generator=MockGenerator(),
        captioner=MockCaptioner(),
        tts=MockTts(media_dir),
    )
