"""Turn-processing engine: session registry, adapter mediation, persistence.

One logical writer per session (a per-session lock); adapter calls are
retried with exponential backoff under a global concurrency cap, and all
adapter work happens before any state mutation so a failed call leaves
both the in-memory session and the persisted log untouched.
"""

from __future__ import annotations

import logging
import threading
import time
import uuid
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable

from pictutor.adapters.http import http_suite
from pictutor.adapters.mock import mock_suite
from pictutor.adapters.types import AdapterError, AdapterSuite, TtsRequest, TtsResult
from pictutor.core.session import (
    SessionClosed,
    SessionState,
    TurnRecord,
    append_turn,
    new_session,
)
from pictutor.core.sessionlog import DecodedLog, encode_header, encode_state, encode_turn
from pictutor.core.types import (
    Affect,
    Language,
    SessionConfig,
    SessionPhase,
    Speaker,
    StudentProfile,
)
from pictutor.langeval.evaluate import EvaluationResult, assess
from pictutor.langeval.lexicon import EMPTY_HIERARCHY, Lexicon, LexiconEntry, load_lexicon
from pictutor.langeval.tokens import tokenize
from pictutor.scaffolding.actions import TutorAction, render_action
from pictutor.scaffolding.phases import after_transition, next_phase
from pictutor.scaffolding.policy import select_scaffold
from pictutor.scene.manifest import load_scene_dir
from pictutor.scene.prompt import assemble_caption_prompt
from pictutor.scene.targets import extract_targets
from pictutor.scene.types import EventRegion, SceneGraph
from pictutor.service.config import ServiceConfig
from pictutor.service.store import SessionStore, UnknownSession

log = logging.getLogger(__name__)


class UnknownScene(KeyError):
    """No manifest was loaded for that scene id."""


class UnknownMedia(KeyError):
    """No media file exists for that reference."""


@dataclass(frozen=True)
class TurnOutcome:
    """What one processed student turn produced."""

    session_id: str
    action: TutorAction
    evaluation: EvaluationResult
    phase: SessionPhase
    transcript: str
    audio_ref: str | None
    marked_text: str
    duration_ms: int
    active_event_id: str


@dataclass(frozen=True)
class CreatedSession:
    session_id: str
    action: TutorAction
    phase: SessionPhase
    audio_ref: str | None
    marked_text: str
    duration_ms: int
    active_event_id: str


@dataclass
class _Runtime:
    state: SessionState
    scene: SceneGraph
    targets: dict[str, tuple[LexiconEntry, ...]]
    scene_keywords: frozenset[str]
    smalltalk: frozenset[str]
    config: SessionConfig
    lock: threading.Lock = field(default_factory=threading.Lock)
    token_cache: dict[str, TurnOutcome] = field(default_factory=dict)


class TutorEngine:
    def __init__(
        self,
        config: ServiceConfig,
        adapters: AdapterSuite | None = None,
        clock: Callable[[], int] | None = None,
    ) -> None:
        config.validate()
        self._config = config
        self._clock = clock or (lambda: int(time.time() * 1000))
        self._store = SessionStore(config.data_dir)
        config.media_dir.mkdir(parents=True, exist_ok=True)
        if adapters is not None:
            self._adapters = adapters
        elif config.use_mock_adapters:
            self._adapters = mock_suite(config.media_dir)
        else:
            self._adapters = http_suite(
                config.asr_url,
                config.generate_url,
                config.caption_url,
                config.tts_url,
                deadline_s=config.adapter_deadline_s,
            )
        self._adapter_slots = threading.Semaphore(config.adapter_concurrency)
        self._lexicons: dict[Language, Lexicon] = {}
        for path in sorted(config.lexicon_dir.glob("lexicon_*.json")):
            lexicon = load_lexicon(path)
            self._lexicons[lexicon.language] = lexicon
        self._scenes = load_scene_dir(config.scene_dir, config.proposal)
        self._scene_keywords: dict[str, frozenset[str]] = {
            scene_id: self._caption_scene(scene)
            for scene_id, scene in self._scenes.items()
        }
        self._sessions: dict[str, _Runtime] = {}
        self._registry_lock = threading.Lock()
        self._restore_persisted()

    # -- adapter plumbing ---------------------------------------------------

    def _call_adapter(self, fn: Callable[[], object]) -> object:
        delay = self._config.adapter_backoff_s
        attempts = self._config.adapter_retries + 1
        for attempt in range(attempts):
            try:
                with self._adapter_slots:
                    return fn()
            except AdapterError:
                if attempt == attempts - 1:
                    raise
                time.sleep(delay)
                delay *= 2

    def _caption_scene(self, scene: SceneGraph) -> frozenset[str]:
        """Caption each event and build the scene's on-topic keyword base."""
        keywords: set[str] = set()
        for det in scene.detections:
            keywords.update(tokenize(det.label, scene.language))
        narrative_stop = (
            self._lexicons[scene.language].stopwords
            if scene.language in self._lexicons
            else frozenset()
        )
        keywords.update(
            t for t in tokenize(scene.global_narrative, scene.language)
            if t not in narrative_stop
        )
        captioned: list[EventRegion] = []
        for event in scene.events:
            try:
                result = self._call_adapter(
                    lambda e=event: self._adapters.captioner.caption(
                        assemble_caption_prompt(scene, e)
                    )
                )
            except AdapterError as exc:
                log.warning("captioning failed for %s/%s: %s", scene.scene_id, event.event_id, exc)
                captioned.append(event)
                continue
            keywords.update(k.lower() for k in result.keywords)
            captioned.append(replace(event, caption=result.caption))
        self._scenes[scene.scene_id] = replace(scene, events=tuple(captioned))
        return frozenset(keywords)

    # -- scene access -------------------------------------------------------

    @property
    def scenes(self) -> dict[str, SceneGraph]:
        return dict(self._scenes)

    def scene(self, scene_id: str) -> SceneGraph:
        try:
            return self._scenes[scene_id]
        except KeyError:
            raise UnknownScene(scene_id) from None

    def scene_image_path(self, scene_id: str) -> Path:
        scene = self.scene(scene_id)
        path = (self._config.scene_dir / scene.image_ref).resolve()
        if not path.is_file():
            raise UnknownMedia(scene.image_ref)
        return path

    # -- media --------------------------------------------------------------

    def save_media(self, data: bytes, suffix: str = ".webm") -> str:
        ref = f"upload-{uuid.uuid4().hex}{suffix}"
        path = self._config.media_dir / ref
        path.write_bytes(data)
        return ref

    def resolve_media(self, ref: str) -> Path:
        path = (self._config.media_dir / ref).resolve()
        if self._config.media_dir.resolve() not in path.parents:
            raise UnknownMedia(ref)
        if not path.is_file():
            raise UnknownMedia(ref)
        return path

    # -- session lifecycle ----------------------------------------------------

    def _session_targets(
        self, scene: SceneGraph, language: Language
    ) -> dict[str, tuple[LexiconEntry, ...]]:
        lexicon = self._lexicons.get(language)
        if lexicon is None:
            return {event.event_id: () for event in scene.events}
        return extract_targets(scene, lexicon.hierarchy)

    def _session_keywords(self, scene: SceneGraph, language: Language) -> frozenset[str]:
        keywords = set(self._scene_keywords.get(scene.scene_id, frozenset()))
        lexicon = self._lexicons.get(language)
        if lexicon is not None:
            keywords |= lexicon.all_surfaces() - lexicon.stopwords
        return frozenset(keywords)

    def create_session(
        self,
        scene_id: str,
        language: Language,
        profile: StudentProfile,
        max_turns: int | None = None,
    ) -> CreatedSession:
        scene = self.scene(scene_id)
        session_config = (
            self._config.session
            if max_turns is None
            else replace(self._config.session, max_turns=max_turns)
        )
        targets = self._session_targets(scene, language)
        scene_for_session = replace(scene, targets=targets)
        state = new_session(
            scene_for_session,
            language,
            profile,
            session_config,
            session_id="s-" + uuid.uuid4().hex[:12],
            now_ms=self._clock(),
        )
        opening = state.turns[0]
        tts = self._synthesize(opening.text, language, highlights=())
        opening = replace(opening, audio_ref=tts.audio_ref)
        state = replace(state, turns=(opening,))
        runtime = _Runtime(
            state=state,
            scene=scene,
            targets=targets,
            scene_keywords=self._session_keywords(scene, language),
            smalltalk=(
                self._lexicons[language].smalltalk if language in self._lexicons else frozenset()
            ),
            config=session_config,
        )
        self._store.create(
            state.session_id,
            [encode_header(state, session_config), encode_turn(opening)],
        )
        with self._registry_lock:
            self._sessions[state.session_id] = runtime
        action = TutorAction(
            text=opening.text,
            scaffold=opening.scaffold,
            highlights=(),
            phase_after=state.phase,
        )
        return CreatedSession(
            session_id=state.session_id,
            action=action,
            phase=state.phase,
            audio_ref=tts.audio_ref,
            marked_text=tts.marked_text,
            duration_ms=tts.duration_ms,
            active_event_id=self._active_event(runtime).event_id,
        )

    def _synthesize(
        self, text: str, language: Language, highlights: tuple[tuple[int, int], ...]
    ) -> TtsResult:
        request = TtsRequest(text=text, language=language, highlights=highlights)
        return self._call_adapter(lambda: self._adapters.tts.synthesize(request))

    def _runtime(self, session_id: str) -> _Runtime:
        with self._registry_lock:
            runtime = self._sessions.get(session_id)
        if runtime is None:
            raise UnknownSession(session_id)
        return runtime

    def _active_event(self, runtime: _Runtime) -> EventRegion:
        support = runtime.state.policy.support
        for event in runtime.scene.events:
            entries = runtime.targets.get(event.event_id, ())
            if any(support.get(entry.key, 0) > 0 for entry in entries):
                return event
        return runtime.scene.events[0]

    def post_turn(
        self,
        session_id: str,
        text: str | None = None,
        audio_ref: str | None = None,
        affect_hint: Affect = Affect.NEUTRAL,
        turn_token: str | None = None,
    ) -> TurnOutcome:
        if (text is None) == (audio_ref is None):
            raise ValueError("provide exactly one of text or audio_ref")
        runtime = self._runtime(session_id)
        with runtime.lock:
            if turn_token is not None and turn_token in runtime.token_cache:
                return runtime.token_cache[turn_token]
            state = runtime.state
            if state.phase is SessionPhase.CLOSED:
                raise SessionClosed(f"session {session_id} is closed")
            language = state.language
            lexicon = self._lexicons.get(language)

            # All adapter calls and pure computation happen before any
            # mutation; a failure below this block cannot corrupt state.
            if audio_ref is not None:
                asr = self._call_adapter(
                    lambda: self._adapters.asr.transcribe(audio_ref, language)
                )
                transcript = asr.transcript
            else:
                transcript = text
            event = self._active_event(runtime)
            targets = runtime.targets.get(event.event_id, ())
            evaluation = assess(
                transcript,
                language,
                targets,
                lexicon.hierarchy if lexicon else EMPTY_HIERARCHY,
                state.policy.anchor,
                affect_hint,
                scene_keywords=runtime.scene_keywords,
                smalltalk=runtime.smalltalk,
            )
            scaffold, target_key, new_policy = select_scaffold(
                evaluation, state.policy, state.profile, [t.key for t in targets]
            )
            phase_after = next_phase(replace(state, policy=new_policy), runtime.config)
            if phase_after != state.phase:
                new_policy = after_transition(new_policy, state.phase, phase_after)
            target_entry = lexicon.entries.get(target_key) if lexicon and target_key else None
            action = render_action(
                scaffold,
                target_entry,
                phase_after,
                language,
                _RetryingGenerator(self),
                recent_turns=state.turns,
            )
            tts = self._synthesize(action.text, language, action.highlights)

            now = self._clock()
            student_turn = TurnRecord(
                turn_index=len(state.turns),
                speaker=Speaker.STUDENT,
                text=transcript,
                audio_ref=audio_ref,
                evaluation=evaluation,
                timestamp=now,
            )
            state = append_turn(state, student_turn)
            lines = [encode_turn(student_turn)]
            if phase_after is not SessionPhase.CLOSED:
                tutor_turn = TurnRecord(
                    turn_index=len(state.turns),
                    speaker=Speaker.TUTOR,
                    text=action.text,
                    audio_ref=tts.audio_ref,
                    scaffold=scaffold,
                    timestamp=now,
                )
                state = append_turn(state, tutor_turn)
                lines.append(encode_turn(tutor_turn))
            state = replace(state, phase=phase_after, policy=new_policy)
            self._store.append(session_id, lines)
            runtime.state = state
            outcome = TurnOutcome(
                session_id=session_id,
                action=action,
                evaluation=evaluation,
                phase=state.phase,
                transcript=transcript,
                audio_ref=tts.audio_ref,
                marked_text=tts.marked_text,
                duration_ms=tts.duration_ms,
                active_event_id=self._active_event(runtime).event_id,
            )
            if turn_token is not None:
                runtime.token_cache[turn_token] = outcome
            return outcome

    # -- read-only views ------------------------------------------------------

    def get_session(self, session_id: str) -> SessionState:
        return self._runtime(session_id).state

    def session_scene(self, session_id: str) -> SceneGraph:
        return self._runtime(session_id).scene

    def active_event_id(self, session_id: str) -> str:
        runtime = self._runtime(session_id)
        return self._active_event(runtime).event_id

    def list_sessions(self) -> list[str]:
        with self._registry_lock:
            return sorted(self._sessions)

    def export_log(self, session_id: str) -> str:
        return self._store.read_text(session_id)

    def export_path(self, session_id: str) -> Path:
        if not self._store.path(session_id).exists():
            raise UnknownSession(session_id)
        return self._store.path(session_id)

    # -- restore ----------------------------------------------------------------

    def rebuild_state(self, decoded: DecodedLog) -> SessionState:
        """Re-derive the full session state (policy included) from a log.

        All transitions are deterministic, so replaying the logged
        evaluations reproduces exactly the live state.
        """
        scene = self.scene(decoded.scene_id)
        targets = self._session_targets(scene, decoded.language)
        scene_for_session = replace(scene, targets=targets)
        base = new_session(
            scene_for_session,
            decoded.language,
            decoded.profile,
            decoded.config,
            session_id=decoded.session_id,
            now_ms=decoded.turns[0].timestamp if decoded.turns else 0,
        )
        state = replace(base, turns=())
        pending: SessionPhase | None = None
        for turn in decoded.turns:
            if turn.speaker is Speaker.TUTOR:
                state = append_turn(state, turn)
                if pending is not None:
                    state = replace(state, phase=pending)
                    pending = None
                continue
            event = self._active_event(
                _Runtime(
                    state=state,
                    scene=scene,
                    targets=targets,
                    scene_keywords=frozenset(),
                    smalltalk=frozenset(),
                    config=decoded.config,
                )
            )
            active_keys = [t.key for t in targets.get(event.event_id, ())]
            _, _, new_policy = select_scaffold(
                turn.evaluation, state.policy, state.profile, active_keys
            )
            phase_after = next_phase(replace(state, policy=new_policy), decoded.config)
            if phase_after != state.phase:
                new_policy = after_transition(new_policy, state.phase, phase_after)
            state = append_turn(state, turn)
            if phase_after is SessionPhase.CLOSED:
                state = replace(state, phase=SessionPhase.CLOSED, policy=new_policy)
                pending = None
            else:
                state = replace(state, policy=new_policy)
                pending = phase_after
        if pending is not None:
            state = replace(state, phase=pending)
        return state

    def encode_session(self, session_id: str) -> str:
        runtime = self._runtime(session_id)
        return encode_state(runtime.state, runtime.config)

    def _restore_persisted(self) -> None:
        from pictutor.core.sessionlog import LogFormatError, decode_log

        for session_id in self._store.list_ids():
            try:
                decoded = decode_log(self._store.read_text(session_id))
                state = self.rebuild_state(decoded)
            except (LogFormatError, UnknownScene) as exc:
                log.warning("skipping unrecoverable session %s: %s", session_id, exc)
                continue
            scene = self._scenes[decoded.scene_id]
            runtime = _Runtime(
                state=state,
                scene=scene,
                targets=self._session_targets(scene, decoded.language),
                scene_keywords=self._session_keywords(scene, decoded.language),
                smalltalk=(
                    self._lexicons[decoded.language].smalltalk
                    if decoded.language in self._lexicons
                    else frozenset()
                ),
                config=decoded.config,
            )
            with self._registry_lock:
                self._sessions[session_id] = runtime


class _RetryingGenerator:
    """Generator adapter proxy applying the engine's retry policy."""

    def __init__(self, engine: TutorEngine) -> None:
        self._engine = engine

    def generate(self, directive) -> str:
        return self._engine._call_adapter(
            lambda: self._engine._adapters.generator.generate(directive)
        )
