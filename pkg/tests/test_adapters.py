from __future__ import annotations

import random
import string
import wave

import httpx
import pytest

from pictutor.adapters.http import HttpAsr, HttpCaptioner, HttpGenerator, HttpTts
from pictutor.adapters.mock import MockAsr, MockCaptioner, MockGenerator, MockTts
from pictutor.adapters.types import (
    AdapterTimeout,
    AsrResult,
    BackendError,
    GeneratorDirective,
    TtsRequest,
    WordSpan,
    mark_highlights,
    strip_highlight_tags,
)
from pictutor.core.types import Language, ScaffoldingType, SessionPhase
from pictutor.scene.prompt import assemble_caption_prompt

from test_scene import scene_with_events


class TestMockAsr:
    def test_fixture_lookup(self):
        result = MockAsr().transcribe("fixture:boy_swims.en", Language.EN)
        assert result.transcript == "the boy swims in the pool"
        assert result.word_spans[0].word == "the"
        assert result.overall_confidence == 0.95

    def test_raw_passthrough(self):
        result = MockAsr().transcribe("raw:hello there", Language.EN)
        assert result.transcript == "hello there"

    def test_unknown_fixture_fails(self):
        with pytest.raises(BackendError):
            MockAsr().transcribe("fixture:missing", Language.EN)

    def test_deterministic(self):
        a = MockAsr().transcribe("fixture:boy_swims.en", Language.EN)
        b = MockAsr().transcribe("fixture:boy_swims.en", Language.EN)
        assert a == b

    def test_spans_are_time_ordered(self):
        result = MockAsr().transcribe("raw:one two three", Language.EN)
        ends = [s.end_ms for s in result.word_spans]
        starts = [s.start_ms for s in result.word_spans]
        assert all(s <= e for s, e in zip(starts, ends))
        assert all(e <= s for e, s in zip(ends, starts[1:]))


class TestMockGenerator:
    def test_hint_template_instantiation(self):
        directive = GeneratorDirective(
            scaffold=ScaffoldingType.HINTS,
            language=Language.EN,
            phase=SessionPhase.GUIDED_DESCRIPTION,
            target_word="swimming",
        )
        text = MockGenerator().generate(directive)
        assert text == (
            "Here's a hint: what is the boy doing in the water? "
            "Think of the word swimming."
        )

    def test_all_types_and_languages_covered(self):
        generator = MockGenerator()
        for language in Language:
            for scaffold in ScaffoldingType:
                for target in (None, "word"):
                    directive = GeneratorDirective(
                        scaffold=scaffold,
                        language=language,
                        phase=SessionPhase.GUIDED_DESCRIPTION,
                        target_word=target,
                    )
                    assert generator.generate(directive)

    def test_closing_phase_uses_closing_template(self):
        directive = GeneratorDirective(
            scaffold=ScaffoldingType.FEEDING_BACK,
            language=Language.EN,
            phase=SessionPhase.CLOSED,
        )
        text = MockGenerator().generate(directive)
        assert "See you next time" in text


class TestMockTts:
    def test_highlight_markup_and_duration(self):
        result = MockTts().synthesize(
            TtsRequest(text="Great job!", language=Language.EN, highlights=((0, 5),))
        )
        assert result.marked_text == "<hl>Great</hl> job!"
        assert result.duration_ms == 600

    def test_strip_tags_roundtrip_random_spans(self):
        rng = random.Random(9)
        for _ in range(100):
            text = "".join(rng.choice(string.ascii_letters + " ") for _ in range(rng.randint(0, 40)))
            spans = []
            cursor = 0
            while cursor < len(text) and rng.random() < 0.6:
                start = rng.randint(cursor, len(text))
                end = rng.randint(start, len(text))
                spans.append((start, end))
                cursor = end
            result = MockTts().synthesize(
                TtsRequest(text=text, language=Language.EN, highlights=tuple(spans))
            )
            assert strip_highlight_tags(result.marked_text) == text

    def test_adjacent_and_empty_spans(self):
        result = MockTts().synthesize(
            TtsRequest(text="abcdef", language=Language.EN, highlights=((0, 3), (3, 3), (3, 6)))
        )
        assert strip_highlight_tags(result.marked_text) == "abcdef"
        result = MockTts().synthesize(TtsRequest(text="abc", language=Language.EN))
        assert result.marked_text == "abc"

    def test_writes_playable_wav_when_media_dir_set(self, tmp_path):
        result = MockTts(tmp_path).synthesize(TtsRequest(text="hi", language=Language.EN))
        path = tmp_path / result.audio_ref
        assert path.exists()
        with wave.open(str(path), "rb") as handle:
            assert handle.getframerate() == 16000
            frames = handle.getnframes()
        assert frames == int(16000 * result.duration_ms / 1000)

    def test_deterministic_refs(self):
        request = TtsRequest(text="same text", language=Language.MS)
        assert MockTts().synthesize(request) == MockTts().synthesize(request)


class TestMockCaptioner:
    def test_caption_from_prompt_labels(self):
        scene = scene_with_events()
        prompt = assemble_caption_prompt(scene, scene.events[0])
        result = MockCaptioner().caption(prompt)
        assert result.event_id == scene.events[0].event_id
        assert "boy" in result.keywords and "pool" in result.keywords
        assert result.caption

    def test_degenerate_prompt_still_valid(self):
        result = MockCaptioner().caption("???")
        assert result.keywords


class TestMarkup:
    def test_mark_highlights_rejects_bad_spans(self):
        with pytest.raises(ValueError):
            mark_highlights("abc", ((2, 1),))
        with pytest.raises(ValueError):
            mark_highlights("abc", ((0, 2), (1, 3)))

    def test_asr_result_transcript_join_invariant(self):
        with pytest.raises(ValueError):
            AsrResult(
                transcript="not matching",
                language=Language.EN,
                word_spans=(WordSpan("hello", 0, 100, 1.0),),
            )


def _transport(handler) -> httpx.Client:
    return httpx.Client(transport=httpx.MockTransport(handler))


class TestHttpAdapters:
    def test_asr_round_trip(self):
        def handler(request: httpx.Request) -> httpx.Response:
            assert request.url.path == "/asr"
            return httpx.Response(200, json={
                "transcript": "hi there",
                "language": "EN",
                "word_spans": [
                    {"word": "hi", "start_ms": 0, "end_ms": 100, "confidence": 0.9},
                    {"word": "there", "start_ms": 100, "end_ms": 300, "confidence": 0.8},
                ],
                "overall_confidence": 0.85,
            })

        asr = HttpAsr("http://backend/asr", client=_transport(handler))
        result = asr.transcribe("ref-1", Language.EN)
        assert result.transcript == "hi there"
        assert result.overall_confidence == 0.85

    def test_generator_round_trip_and_payload(self):
        seen = {}

        def handler(request: httpx.Request) -> httpx.Response:
            import json

            seen.update(json.loads(request.content))
            return httpx.Response(200, json={"text": "generated line"})

        generator = HttpGenerator("http://backend/generate", client=_transport(handler))
        directive = GeneratorDirective(
            scaffold=ScaffoldingType.HINTS,
            language=Language.MS,
            phase=SessionPhase.GUIDED_DESCRIPTION,
            target_word="kolam",
            recent_turns=(("Student", "hi"),),
        )
        assert generator.generate(directive) == "generated line"
        assert seen["scaffold"] == "Hints"
        assert seen["language"] == "MS"
        assert seen["target_word"] == "kolam"
        assert seen["recent_turns"] == [{"speaker": "Student", "text": "hi"}]

    def test_captioner_round_trip(self):
        def handler(request: httpx.Request) -> httpx.Response:
            return httpx.Response(200, json={
                "event_id": "ev-1", "caption": "a boy", "keywords": ["boy"],
            })

        captioner = HttpCaptioner("http://backend/caption", client=_transport(handler))
        result = captioner.caption("prompt")
        assert result.caption == "a boy"

    def test_tts_round_trip_validates_markup(self):
        def good(request: httpx.Request) -> httpx.Response:
            return httpx.Response(200, json={
                "audio_ref": "a.wav", "duration_ms": 100, "marked_text": "<hl>ab</hl>c",
            })

        tts = HttpTts("http://backend/tts", client=_transport(good))
        result = tts.synthesize(TtsRequest(text="abc", language=Language.EN, highlights=((0, 2),)))
        assert result.audio_ref == "a.wav"

        def bad(request: httpx.Request) -> httpx.Response:
            return httpx.Response(200, json={
                "audio_ref": "a.wav", "duration_ms": 100, "marked_text": "<hl>zz</hl>c",
            })

        tts = HttpTts("http://backend/tts", client=_transport(bad))
        with pytest.raises(BackendError):
            tts.synthesize(TtsRequest(text="abc", language=Language.EN))

    def test_http_error_codes_surface_as_backend_errors(self):
        def handler(request: httpx.Request) -> httpx.Response:
            return httpx.Response(500, text="exploded")

        asr = HttpAsr("http://backend/asr", client=_transport(handler))
        with pytest.raises(BackendError) as info:
            asr.transcribe("ref", Language.EN)
        assert info.value.code == "500"

    def test_timeout_maps_to_adapter_timeout(self):
        def handler(request: httpx.Request) -> httpx.Response:
            raise httpx.ConnectTimeout("too slow")

        generator = HttpGenerator("http://backend/generate", client=_transport(handler))
        with pytest.raises(AdapterTimeout):
            generator.generate(GeneratorDirective(
                scaffold=ScaffoldingType.HINTS,
                language=Language.EN,
                phase=SessionPhase.GUIDED_DESCRIPTION,
            ))

    def test_malformed_body_maps_to_backend_error(self):
        def handler(request: httpx.Request) -> httpx.Response:
            return httpx.Response(200, text="not json")

        captioner = HttpCaptioner("http://backend/caption", client=_transport(handler))
        with pytest.raises(BackendError):
            captioner.caption("prompt")
