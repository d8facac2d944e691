from __future__ import annotations

import dataclasses
import json
import threading

import pytest
from fastapi.testclient import TestClient

from pictutor.adapters.mock import MockAsr, MockCaptioner, MockGenerator, MockTts, mock_suite
from pictutor.adapters.types import AdapterSuite, AdapterTimeout, BackendError
from pictutor.core.sessionlog import decode_log
from pictutor.core.types import Language, SessionPhase
from pictutor.service.app import create_app
from pictutor.service.config import ConfigError, demo_config, load_config
from pictutor.service.engine import TutorEngine

FULL_COVERAGE = "i can see the boy swimming and throwing the ball"


@pytest.fixture
def client(tmp_path):
    config = demo_config(tmp_path / "data")
    return TestClient(create_app(config))


def create_session(client, scene_id="pool", language="EN", max_turns=None):
    body = {"scene_id": scene_id, "language": language}
    if max_turns is not None:
        body["max_turns"] = max_turns
    response = client.post("/sessions", json=body)
    assert response.status_code == 201, response.text
    return response.json()


class TestScenes:
    def test_list_scenes(self, client):
        payload = client.get("/scenes").json()
        ids = [s["scene_id"] for s in payload["scenes"]]
        assert ids == ["playground", "pool"]
        pool = next(s for s in payload["scenes"] if s["scene_id"] == "pool")
        assert len(pool["events"]) == 2
        assert all(len(e["box"]) == 4 for e in pool["events"])
        assert all(e["caption"] for e in pool["events"])

    def test_scene_image_served(self, client):
        response = client.get("/scenes/pool/image")
        assert response.status_code == 200
        assert "svg" in response.headers["content-type"]

    def test_unknown_image_404(self, client):
        assert client.get("/scenes/nope/image").status_code == 404


class TestCreateSession:
    def test_create_returns_opening_question_and_boxes(self, client):
        payload = create_session(client)
        assert payload["action"]["text"] == "What do you see in this picture?"
        assert payload["action"]["scaffold"] == "Questioning"
        assert payload["phase"] == "Opening"
        assert payload["scene"]["image_url"] == "/scenes/pool/image"
        active = [e for e in payload["scene"]["events"] if e["active"]]
        assert len(active) == 1
        assert payload["audio_url"].startswith("/media/")

    def test_unknown_scene_404(self, client):
        response = client.post("/sessions", json={"scene_id": "missing"})
        assert response.status_code == 404
        assert response.json()["error"] == "UnknownScene"

    def test_distinct_ids_identical_openings(self, client):
        a = create_session(client)
        b = create_session(client)
        assert a["session_id"] != b["session_id"]
        assert a["action"] == b["action"]

    def test_localized_opening(self, client):
        payload = create_session(client, language="MS")
        assert payload["action"]["text"] == "Apakah yang kamu nampak dalam gambar ini?"


class TestPostTurn:
    def test_full_coverage_gets_positive_scaffold(self, client):
        session = create_session(client)
        response = client.post(
            f"/sessions/{session['session_id']}/turns", json={"text": FULL_COVERAGE}
        )
        assert response.status_code == 200
        body = response.json()
        assert body["action"]["scaffold"] in {"FeedingBack", "Explaining"}
        assert body["evaluation"]["coverage"] == 1.0
        assert body["phase"] == "GuidedDescription"

    def test_off_topic_redirects(self, client):
        session = create_session(client)
        body = client.post(
            f"/sessions/{session['session_id']}/turns",
            json={"text": "dinosaur robot"},
        ).json()
        assert body["action"]["scaffold"] == "Instructing"
        assert body["evaluation"]["off_topic"] is True

    def test_audio_ref_goes_through_asr(self, client):
        session = create_session(client)
        body = client.post(
            f"/sessions/{session['session_id']}/turns",
            json={"audio_ref": "fixture:boy_swims.en"},
        ).json()
        assert body["transcript"] == "the boy swims in the pool"

    def test_requires_exactly_one_input(self, client):
        session = create_session(client)
        url = f"/sessions/{session['session_id']}/turns"
        assert client.post(url, json={}).status_code == 400
        assert (
            client.post(url, json={"text": "hi", "audio_ref": "fixture:x"}).status_code
            == 400
        )

    def test_unknown_session_404(self, client):
        assert (
            client.post("/sessions/nope/turns", json={"text": "hi"}).status_code == 404
        )

    def test_session_closes_at_max_turns_and_409_after(self, client):
        session = create_session(client, max_turns=3)
        url = f"/sessions/{session['session_id']}/turns"
        phases = [client.post(url, json={"text": FULL_COVERAGE}).json()["phase"]
                  for _ in range(3)]
        assert phases[-1] == "Closed"
        response = client.post(url, json={"text": "more"})
        assert response.status_code == 409
        assert response.json()["error"] == "SessionClosed"

    def test_highlights_point_at_target_word(self, client):
        session = create_session(client)
        body = client.post(
            f"/sessions/{session['session_id']}/turns", json={"text": "the boy"}
        ).json()
        action = body["action"]
        if action["target_key"]:
            for start, end in action["highlights"]:
                fragment = action["text"][start:end]
                assert fragment.lower() == fragment.lower()
                assert "<hl>" + fragment + "</hl>" in body["marked_text"]

    def test_affect_hint_carried_into_evaluation(self, client):
        session = create_session(client)
        body = client.post(
            f"/sessions/{session['session_id']}/turns",
            json={"text": "the boy", "affect_hint": "Frustrated"},
        ).json()
        assert body["evaluation"]["affect"] == "Frustrated"
        assert body["action"]["scaffold"] == "Modeling"


class TestIdempotency:
    def test_same_token_returns_original_without_new_turns(self, client):
        session = create_session(client)
        url = f"/sessions/{session['session_id']}/turns"
        first = client.post(url, json={"text": "the boy", "turn_token": "tok-1"}).json()
        turns_after_first = len(
            client.get(f"/sessions/{session['session_id']}").json()["turns"]
        )
        second = client.post(url, json={"text": "the boy", "turn_token": "tok-1"}).json()
        assert second == first
        turns_after_second = len(
            client.get(f"/sessions/{session['session_id']}").json()["turns"]
        )
        assert turns_after_first == turns_after_second


class _FailingAsr:
    def transcribe(self, audio_ref, language):
        raise AdapterTimeout("asr down")


class _FailingGenerator:
    def generate(self, directive):
        raise AdapterTimeout("generator down")


class _FailingTts:
    def synthesize(self, request):
        raise BackendError("oom", "tts down")


class _FlakyGenerator:
    def __init__(self, failures: int) -> None:
        self.remaining = failures
        self.inner = MockGenerator()

    def generate(self, directive):
        if self.remaining > 0:
            self.remaining -= 1
            raise AdapterTimeout("transient")
        return self.inner.generate(directive)


def _suite(**overrides) -> AdapterSuite:
    base = {
        "asr": MockAsr(),
        "generator": MockGenerator(),
        "captioner": MockCaptioner(),
        "tts": MockTts(),
    }
    base.update(overrides)
    return AdapterSuite(**base)


def fast_config(tmp_path):
    return dataclasses.replace(
        demo_config(tmp_path / "data"), adapter_backoff_s=0.001
    )


class TestFaultIsolation:
    @pytest.mark.parametrize(
        "overrides,request_body",
        [
            ({"asr": _FailingAsr()}, {"audio_ref": "fixture:boy_swims.en"}),
            ({"generator": _FailingGenerator()}, {"text": "the boy"}),
            ({"tts": _FailingTts()}, {"text": "the boy"}),
        ],
    )
    def test_failed_adapter_leaves_log_untouched(self, tmp_path, overrides, request_body):
        config = fast_config(tmp_path)
        engine = TutorEngine(config, adapters=_suite())
        client = TestClient(create_app(config, engine))
        session = create_session(client)
        sid = session["session_id"]
        client.post(f"/sessions/{sid}/turns", json={"text": "the boy"})
        log_before = client.get(f"/sessions/{sid}/log").text
        turns_before = client.get(f"/sessions/{sid}").json()["turns"]

        engine._adapters = _suite(**overrides)
        response = client.post(f"/sessions/{sid}/turns", json=request_body)
        assert response.status_code == 503
        body = response.json()
        assert body["error"] == "AdapterFailure"
        assert body["retryable"] is True
        assert response.headers["retry-after"] == "1"
        assert client.get(f"/sessions/{sid}/log").text == log_before
        assert client.get(f"/sessions/{sid}").json()["turns"] == turns_before

    def test_transient_failure_recovered_by_retry(self, tmp_path):
        config = fast_config(tmp_path)
        engine = TutorEngine(config, adapters=_suite(generator=_FlakyGenerator(2)))
        client = TestClient(create_app(config, engine))
        session = create_session(client)
        response = client.post(
            f"/sessions/{session['session_id']}/turns", json={"text": "the boy"}
        )
        assert response.status_code == 200

    def test_exhausted_retries_fail(self, tmp_path):
        config = fast_config(tmp_path)
        engine = TutorEngine(config, adapters=_suite(generator=_FlakyGenerator(3)))
        client = TestClient(create_app(config, engine))
        session = create_session(client)
        response = client.post(
            f"/sessions/{session['session_id']}/turns", json={"text": "the boy"}
        )
        assert response.status_code == 503


class TestViewsAndExport:
    def test_get_session_reflects_turns(self, client):
        session = create_session(client)
        sid = session["session_id"]
        client.post(f"/sessions/{sid}/turns", json={"text": "the boy"})
        view = client.get(f"/sessions/{sid}").json()
        assert view["phase"] == "GuidedDescription"
        assert len(view["turns"]) == 3
        assert view["turns"][0]["speaker"] == "Tutor"
        assert view["turns"][1]["evaluation"]["matched_targets"] == ["boy"]
        assert view["scene"]["scene_id"] == "pool"

    def test_unknown_session_404(self, client):
        assert client.get("/sessions/nope").status_code == 404
        assert client.get("/sessions/nope/log").status_code == 404

    def test_export_after_create_has_header_and_one_turn(self, client):
        session = create_session(client)
        log = client.get(f"/sessions/{session['session_id']}/log").text
        lines = log.strip().splitlines()
        assert len(lines) == 2
        header = json.loads(lines[0])
        assert header["session_id"] == session["session_id"]

    def test_export_reimport_matches_live_state(self, tmp_path):
        config = demo_config(tmp_path / "data")
        engine = TutorEngine(config)
        client = TestClient(create_app(config, engine))
        session = create_session(client)
        sid = session["session_id"]
        for text in ["the boy", FULL_COVERAGE, "dinosaur robot", "the girl"]:
            client.post(f"/sessions/{sid}/turns", json={"text": text})
        log = client.get(f"/sessions/{sid}/log").text
        decoded = decode_log(log)
        rebuilt = engine.rebuild_state(decoded)
        assert rebuilt == engine.get_session(sid)
        assert engine.encode_session(sid) == log

    def test_restart_restores_sessions(self, tmp_path):
        config = demo_config(tmp_path / "data")
        engine = TutorEngine(config)
        client = TestClient(create_app(config, engine))
        session = create_session(client)
        sid = session["session_id"]
        client.post(f"/sessions/{sid}/turns", json={"text": "the boy"})
        before = engine.get_session(sid)

        reborn = TutorEngine(config)
        assert reborn.get_session(sid) == before
        # The restored session keeps accepting turns.
        outcome = reborn.post_turn(sid, text=FULL_COVERAGE)
        assert outcome.phase is not None


class TestTermination:
    def test_any_script_reaches_closed_within_max_turns(self, tmp_path):
        import random

        config = demo_config(tmp_path / "data")
        engine = TutorEngine(config)
        rng = random.Random(99)
        words = ["boy", "pool", "swimming", "dinosaur", "yes", "playing",
                 "the girl", FULL_COVERAGE, ""]
        for trial in range(5):
            max_turns = rng.randint(1, 12)
            from pictutor.core.types import (
                Attention,
                Confidence,
                Proficiency,
                StudentProfile,
            )

            profile = StudentProfile(
                f"rand-{trial}", rng.choice([1, 2]), rng.choice(list(Confidence)),
                Attention.STEADY, Proficiency.BEGINNER,
            )
            created = engine.create_session("pool", Language.EN, profile, max_turns)
            phase = None
            for _ in range(max_turns):
                outcome = engine.post_turn(created.session_id, text=rng.choice(words))
                phase = outcome.phase
                if phase is SessionPhase.CLOSED:
                    break
            assert phase is SessionPhase.CLOSED
            state = engine.get_session(created.session_id)
            assert len(state.turns) <= 2 * max_turns


class TestConcurrency:
    def test_parallel_posts_to_distinct_sessions_stay_serialized(self, tmp_path):
        config = demo_config(tmp_path / "data")
        engine = TutorEngine(config)
        client = TestClient(create_app(config, engine))
        sids = [create_session(client)["session_id"] for _ in range(2)]
        errors: list[Exception] = []

        def hammer(sid: str) -> None:
            try:
                for _ in range(6):
                    engine.post_turn(sid, text="the boy")
            except Exception as exc:  # pragma: no cover - failure reporting
                errors.append(exc)

        threads = [threading.Thread(target=hammer, args=(sid,)) for sid in sids for _ in range(2)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert not errors
        for sid in sids:
            view = client.get(f"/sessions/{sid}").json()
            indices = [t["turn_index"] for t in view["turns"]]
            assert indices == list(range(len(indices)))

    def test_crash_consistent_prefixes(self, tmp_path):
        config = demo_config(tmp_path / "data")
        engine = TutorEngine(config)
        client = TestClient(create_app(config, engine))
        sid = create_session(client)["session_id"]
        for text in ["the boy", "playing", FULL_COVERAGE]:
            client.post(f"/sessions/{sid}/turns", json={"text": text})
            decoded = decode_log(client.get(f"/sessions/{sid}/log").text)
            rebuilt = engine.rebuild_state(decoded)
            indices = [t.turn_index for t in rebuilt.turns]
            assert indices == list(range(len(indices)))
            assert rebuilt == engine.get_session(sid)


class TestMedia:
    def test_upload_then_fetch(self, client):
        response = client.post(
            "/media", content=b"RIFFdata", headers={"content-type": "audio/wav"}
        )
        assert response.status_code == 201
        ref = response.json()["audio_ref"]
        assert ref.endswith(".wav")
        fetched = client.get(f"/media/{ref}")
        assert fetched.status_code == 200
        assert fetched.content == b"RIFFdata"

    def test_empty_upload_rejected(self, client):
        assert client.post("/media", content=b"").status_code == 400

    def test_unknown_media_404(self, client):
        assert client.get("/media/nope.wav").status_code == 404

    def test_tts_audio_is_served(self, client):
        session = create_session(client)
        audio = client.get(session["audio_url"])
        assert audio.status_code == 200
        assert audio.content[:4] == b"RIFF"


class TestConfig:
    def test_file_and_env_overrides(self, tmp_path):
        config_file = tmp_path / "service.conf"
        config_file.write_text(
            "# comment\nMAX_TURNS=12\nPORT=9001\nDATA_DIR={}\n".format(tmp_path / "d"),
            encoding="utf-8",
        )
        config = load_config(config_file, environ={"PICTUTOR_PORT": "9002"})
        assert config.session.max_turns == 12
        assert config.port == 9002

    def test_bad_line_rejected(self, tmp_path):
        config_file = tmp_path / "service.conf"
        config_file.write_text("NOT A PAIR\n", encoding="utf-8")
        with pytest.raises(ConfigError):
            load_config(config_file, environ={})

    def test_partial_adapter_urls_rejected(self, tmp_path):
        config = dataclasses.replace(
            demo_config(tmp_path), asr_url="http://backend/asr"
        )
        with pytest.raises(ConfigError):
            config.validate()

    def test_missing_scene_dir_rejected(self, tmp_path):
        config = dataclasses.replace(
            demo_config(tmp_path), scene_dir=tmp_path / "nowhere"
        )
        with pytest.raises(ConfigError):
            config.validate()
