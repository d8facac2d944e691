"""HTTP clients for remote model backends.

One JSON POST endpoint per backend (``/asr``, ``/generate``,
``/caption``, ``/tts``), request/response only, audio passed by
reference. Timeouts raise :class:`AdapterTimeout`; every other failure
(including malformed responses) raises :class:`BackendError`.
"""

from __future__ import annotations

import httpx

from pictutor.adapters.types import (
    AdapterSuite,
    AdapterTimeout,
    AsrResult,
    BackendError,
    CaptionResult,
    GeneratorDirective,
    TtsRequest,
    TtsResult,
    WordSpan,
    strip_highlight_tags,
)
from pictutor.core.types import Language

DEFAULT_DEADLINE_S = 10.0


def _post(client: httpx.Client, url: str, payload: dict, deadline_s: float) -> dict:
    try:
        response = client.post(url, json=payload, timeout=deadline_s)
    except httpx.TimeoutException as exc:
        raise AdapterTimeout(f"{url} exceeded {deadline_s}s deadline") from exc
    except httpx.HTTPError as exc:
        raise BackendError("unreachable", f"{url}: {exc}") from exc
    if response.status_code != 200:
        raise BackendError(str(response.status_code), response.text[:500])
    try:
        body = response.json()
    except ValueError as exc:
        raise BackendError("bad_payload", f"{url} returned non-JSON body") from exc
    if not isinstance(body, dict):
        raise BackendError("bad_payload", f"{url} returned a non-object body")
    return body


class HttpAsr:
    def __init__(self, url: str, client: httpx.Client | None = None,
                 deadline_s: float = DEFAULT_DEADLINE_S) -> None:
        self._url = url
        self._client = client or httpx.Client()
        self._deadline_s = deadline_s

    def transcribe(self, audio_ref: str, language: Language) -> AsrResult:
        body = _post(
            self._client,
            self._url,
            {"audio_ref": audio_ref, "language": language.value},
            self._deadline_s,
        )
        try:
            return AsrResult(
                transcript=body["transcript"],
                language=Language(body.get("language", language.value)),
                word_spans=tuple(
                    WordSpan(s["word"], int(s["start_ms"]), int(s["end_ms"]),
                             float(s["confidence"]))
                    for s in body.get("word_spans", [])
                ),
                overall_confidence=float(body.get("overall_confidence", 1.0)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise BackendError("bad_payload", f"asr response invalid: {exc}") from exc


class HttpGenerator:
    def __init__(self, url: str, client: httpx.Client | None = None,
                 deadline_s: float = DEFAULT_DEADLINE_S) -> None:
        self._url = url
        self._client = client or httpx.Client()
        self._deadline_s = deadline_s

    def generate(self, directive: GeneratorDirective) -> str:
        body = _post(self._client, self._url, directive.to_payload(), self._deadline_s)
        text = body.get("text")
        if not isinstance(text, str) or not text:
            raise BackendError("bad_payload", "generator response missing text")
        return text


class HttpCaptioner:
    def __init__(self, url: str, client: httpx.Client | None = None,
                 deadline_s: float = DEFAULT_DEADLINE_S) -> None:
        self._url = url
        self._client = client or httpx.Client()
        self._deadline_s = deadline_s

    def caption(self, prompt: str) -> CaptionResult:
        body = _post(self._client, self._url, {"prompt": prompt}, self._deadline_s)
        try:
            return CaptionResult(
                event_id=body.get("event_id", ""),
                caption=body["caption"],
                keywords=tuple(body.get("keywords", [])),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise BackendError("bad_payload", f"caption response invalid: {exc}") from exc


class HttpTts:
    def __init__(self, url: str, client: httpx.Client | None = None,
                 deadline_s: float = DEFAULT_DEADLINE_S) -> None:
        self._url = url
        self._client = client or httpx.Client()
        self._deadline_s = deadline_s

    def synthesize(self, request: TtsRequest) -> TtsResult:
        payload = {
            "text": request.text,
            "language": request.language.value,
            "voice": request.voice.value,
            "highlights": [[start, end] for start, end in request.highlights],
        }
        body = _post(self._client, self._url, payload, self._deadline_s)
        try:
            result = TtsResult(
                audio_ref=body["audio_ref"],
                duration_ms=int(body["duration_ms"]),
                marked_text=body["marked_text"],
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise BackendError("bad_payload", f"tts response invalid: {exc}") from exc
        if strip_highlight_tags(result.marked_text) != request.text:
            raise BackendError("bad_payload", "tts marked_text does not round-trip to the request text")
        return result


def http_suite(
    asr_url: str,
    generate_url: str,
    caption_url: str,
    tts_url: str,
    client: httpx.Client | None = None,
    deadline_s: float = DEFAULT_DEADLINE_S,
) -> AdapterSuite:
    shared = client or httpx.Client()
    return AdapterSuite(
        asr=HttpAsr(asr_url, shared, deadline_s),
        generator=HttpGenerator(generate_url, shared, deadline_s),
        captioner=HttpCaptioner(caption_url, shared, deadline_s),
        tts=HttpTts(tts_url, shared, deadline_s),
    )
