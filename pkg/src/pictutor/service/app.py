"""REST API over the tutoring engine.

Endpoints: POST /sessions, POST /sessions/{id}/turns, GET /sessions/{id},
GET /scenes, GET /scenes/{id}/image, GET /sessions/{id}/log,
POST /media, GET /media/{ref}; optionally serves the web UI from a
configured directory.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import Body, FastAPI, Request, Response
from fastapi.responses import FileResponse, JSONResponse, PlainTextResponse, RedirectResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from pictutor.adapters.types import AdapterError
from pictutor.core.session import SessionClosed, SessionState, TurnRecord
from pictutor.core.sessionlog import evaluation_payload
from pictutor.core.types import (
    Affect,
    Attention,
    Confidence,
    Language,
    Proficiency,
    StudentProfile,
)
from pictutor.scaffolding.actions import TutorAction
from pictutor.scene.types import SceneGraph
from pictutor.service.config import ServiceConfig
from pictutor.service.engine import CreatedSession, TurnOutcome, TutorEngine, UnknownMedia, UnknownScene
from pictutor.service.store import UnknownSession


class ProfileModel(BaseModel):
    student_id: str = "student"
    grade: int = 1
    confidence: Confidence = Confidence.MEDIUM
    attention: Attention = Attention.STEADY
    proficiency: Proficiency = Proficiency.BEGINNER

    def to_profile(self) -> StudentProfile:
        return StudentProfile(
            student_id=self.student_id,
            grade=self.grade,
            confidence=self.confidence,
            attention=self.attention,
            proficiency=self.proficiency,
        )


class CreateSessionModel(BaseModel):
    scene_id: str
    language: Language = Language.EN
    profile: ProfileModel = Field(default_factory=ProfileModel)
    max_turns: int | None = None


class TurnModel(BaseModel):
    text: str | None = None
    audio_ref: str | None = None
    affect_hint: Affect = Affect.NEUTRAL
    turn_token: str | None = None


def _action_payload(action: TutorAction) -> dict:
    return {
        "text": action.text,
        "scaffold": action.scaffold.value,
        "highlights": [[start, end] for start, end in action.highlights],
        "phase_after": action.phase_after.value,
        "target_key": action.target_key,
    }


def _turn_payload(turn: TurnRecord) -> dict:
    return {
        "turn_index": turn.turn_index,
        "speaker": turn.speaker.value,
        "text": turn.text,
        "audio_ref": turn.audio_ref,
        "audio_url": f"/media/{turn.audio_ref}" if turn.audio_ref else None,
        "scaffold": turn.scaffold.value if turn.scaffold else None,
        "evaluation": evaluation_payload(turn.evaluation) if turn.evaluation else None,
        "timestamp": turn.timestamp,
    }


def _scene_payload(scene: SceneGraph, active_event_id: str | None = None) -> dict:
    return {
        "scene_id": scene.scene_id,
        "language": scene.language.value,
        "image_url": f"/scenes/{scene.scene_id}/image",
        "global_narrative": scene.global_narrative,
        "events": [
            {
                "event_id": event.event_id,
                "box": list(event.box),
                "salience": event.salience,
                "caption": event.caption,
                "active": event.event_id == active_event_id,
            }
            for event in scene.events
        ],
    }


def _session_payload(state: SessionState, active_event_id: str) -> dict:
    return {
        "session_id": state.session_id,
        "language": state.language.value,
        "scene_id": state.scene_id,
        "phase": state.phase.value,
        "max_turns": state.max_turns,
        "active_event_id": active_event_id,
        "turns": [_turn_payload(turn) for turn in state.turns],
    }


def _created_payload(engine: TutorEngine, created: CreatedSession) -> dict:
    scene = engine.session_scene(created.session_id)
    return {
        "session_id": created.session_id,
        "phase": created.phase.value,
        "action": _action_payload(created.action),
        "audio_url": f"/media/{created.audio_ref}" if created.audio_ref else None,
        "marked_text": created.marked_text,
        "duration_ms": created.duration_ms,
        "scene": _scene_payload(scene, created.active_event_id),
    }


def _outcome_payload(outcome: TurnOutcome) -> dict:
    return {
        "session_id": outcome.session_id,
        "phase": outcome.phase.value,
        "transcript": outcome.transcript,
        "action": _action_payload(outcome.action),
        "evaluation": evaluation_payload(outcome.evaluation),
        "audio_url": f"/media/{outcome.audio_ref}" if outcome.audio_ref else None,
        "marked_text": outcome.marked_text,
        "duration_ms": outcome.duration_ms,
        "active_event_id": outcome.active_event_id,
    }


def create_app(config: ServiceConfig, engine: TutorEngine | None = None) -> FastAPI:
    engine = engine or TutorEngine(config)
    app = FastAPI(title="pictutor", version="0.1.0")
    app.state.engine = engine

    @app.exception_handler(UnknownScene)
    @app.exception_handler(UnknownSession)
    @app.exception_handler(UnknownMedia)
    async def _not_found(request: Request, exc: Exception) -> JSONResponse:
        return JSONResponse(
            status_code=404, content={"error": type(exc).__name__, "detail": str(exc)}
        )

    @app.exception_handler(SessionClosed)
    async def _closed(request: Request, exc: SessionClosed) -> JSONResponse:
        return JSONResponse(
            status_code=409, content={"error": "SessionClosed", "detail": str(exc)}
        )

    @app.exception_handler(AdapterError)
    async def _adapter_failure(request: Request, exc: AdapterError) -> JSONResponse:
        return JSONResponse(
            status_code=503,
            content={"error": "AdapterFailure", "detail": str(exc), "retryable": True},
            headers={"Retry-After": "1"},
        )

    @app.exception_handler(ValueError)
    async def _bad_request(request: Request, exc: ValueError) -> JSONResponse:
        return JSONResponse(
            status_code=400, content={"error": "BadRequest", "detail": str(exc)}
        )

    @app.get("/scenes")
    def list_scenes() -> dict:
        return {
            "scenes": [
                _scene_payload(scene) for _, scene in sorted(engine.scenes.items())
            ]
        }

    @app.get("/scenes/{scene_id}/image")
    def scene_image(scene_id: str) -> FileResponse:
        path = engine.scene_image_path(scene_id)
        media_type = "image/svg+xml" if path.suffix == ".svg" else None
        return FileResponse(path, media_type=media_type)

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionModel) -> dict:
        created = engine.create_session(
            body.scene_id, body.language, body.profile.to_profile(), body.max_turns
        )
        return _created_payload(engine, created)

    @app.post("/sessions/{session_id}/turns")
    def post_turn(session_id: str, body: TurnModel) -> dict:
        outcome = engine.post_turn(
            session_id,
            text=body.text,
            audio_ref=body.audio_ref,
            affect_hint=body.affect_hint,
            turn_token=body.turn_token,
        )
        return _outcome_payload(outcome)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str) -> dict:
        state = engine.get_session(session_id)
        payload = _session_payload(state, engine.active_event_id(session_id))
        payload["scene"] = _scene_payload(
            engine.session_scene(session_id), payload["active_event_id"]
        )
        return payload

    @app.get("/sessions/{session_id}/log")
    def export_log(session_id: str) -> PlainTextResponse:
        return PlainTextResponse(
            engine.export_log(session_id), media_type="application/x-ndjson"
        )

    @app.post("/media", status_code=201)
    async def upload_media(request: Request) -> dict:
        data = await request.body()
        if not data:
            return JSONResponse(
                status_code=400,
                content={"error": "BadRequest", "detail": "empty body"},
            )
        content_type = request.headers.get("content-type", "")
        suffix = {
            "audio/wav": ".wav",
            "audio/x-wav": ".wav",
            "audio/webm": ".webm",
            "audio/ogg": ".ogg",
            "audio/mpeg": ".mp3",
        }.get(content_type.split(";")[0].strip(), ".bin")
        return {"audio_ref": engine.save_media(data, suffix)}

    @app.get("/media/{ref}")
    def get_media(ref: str) -> FileResponse:
        return FileResponse(engine.resolve_media(ref))

    if config.ui_dir is not None:
        app.mount("/ui", StaticFiles(directory=str(config.ui_dir), html=True), name="ui")

        @app.get("/", include_in_schema=False)
        def index() -> RedirectResponse:
            return RedirectResponse(url="/ui/")

    return app
