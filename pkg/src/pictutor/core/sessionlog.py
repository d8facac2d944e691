"""Session-log line format: one JSON header line, then one line per turn.

The header carries ``{session_id, language, profile, scene_id, config}``;
turn lines mirror :class:`TurnRecord` field names, with enumerations
serialized as their exact names. Encoding is canonical (sorted keys,
compact separators), so decoding a log and re-encoding it reproduces the
bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from pictutor.core.session import SessionState, TurnRecord
from pictutor.core.types import (
    Affect,
    Attention,
    Confidence,
    Language,
    Proficiency,
    ScaffoldingType,
    SessionConfig,
    Speaker,
    StudentProfile,
)
from pictutor.langeval.evaluate import EvaluationResult


class LogFormatError(ValueError):
    """Raised when a session log line cannot be parsed."""


def _dumps(payload: dict) -> str:
    return json.dumps(payload, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def _profile_payload(profile: StudentProfile) -> dict:
    return {
        "student_id": profile.student_id,
        "grade": profile.grade,
        "confidence": profile.confidence.value,
        "attention": profile.attention.value,
        "proficiency": profile.proficiency.value,
    }


def _config_payload(config: SessionConfig) -> dict:
    return {
        "max_turns": config.max_turns,
        "guided_turns": config.guided_turns,
        "vocab_turns": config.vocab_turns,
        "story_turns": config.story_turns,
    }


def evaluation_payload(evaluation: EvaluationResult) -> dict:
    return {
        "coverage": evaluation.coverage,
        "matched_targets": sorted(evaluation.matched_targets),
        "specificity_ok": evaluation.specificity_ok,
        "off_topic": evaluation.off_topic,
        "affect": evaluation.affect.value,
        "sentence_ok": evaluation.sentence_ok,
        "vague_targets": list(evaluation.vague_targets),
    }


def encode_header(state: SessionState, config: SessionConfig) -> str:
    return _dumps(
        {
            "session_id": state.session_id,
            "language": state.language.value,
            "profile": _profile_payload(state.profile),
            "scene_id": state.scene_id,
            "config": _config_payload(config),
        }
    )


def encode_turn(turn: TurnRecord) -> str:
    return _dumps(
        {
            "turn_index": turn.turn_index,
            "speaker": turn.speaker.value,
            "text": turn.text,
            "audio_ref": turn.audio_ref,
            "scaffold": turn.scaffold.value if turn.scaffold else None,
            "evaluation": evaluation_payload(turn.evaluation) if turn.evaluation else None,
            "timestamp": turn.timestamp,
        }
    )


def encode_state(state: SessionState, config: SessionConfig) -> str:
    """Full log text for a session, with a trailing newline."""
    lines = [encode_header(state, config)]
    lines.extend(encode_turn(turn) for turn in state.turns)
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class DecodedLog:
    """Parsed log contents; policy/phase are derived by replay, not stored."""

    session_id: str
    language: Language
    profile: StudentProfile
    scene_id: str
    config: SessionConfig
    turns: tuple[TurnRecord, ...]


def _parse_evaluation(payload: dict) -> EvaluationResult:
    return EvaluationResult(
        coverage=float(payload["coverage"]),
        matched_targets=frozenset(payload["matched_targets"]),
        specificity_ok=bool(payload["specificity_ok"]),
        off_topic=bool(payload["off_topic"]),
        affect=Affect(payload["affect"]),
        sentence_ok=bool(payload["sentence_ok"]),
        vague_targets=tuple(payload.get("vague_targets", ())),
    )


def _parse_turn(payload: dict) -> TurnRecord:
    return TurnRecord(
        turn_index=int(payload["turn_index"]),
        speaker=Speaker(payload["speaker"]),
        text=payload["text"],
        audio_ref=payload.get("audio_ref"),
        scaffold=ScaffoldingType(payload["scaffold"]) if payload.get("scaffold") else None,
        evaluation=(
            _parse_evaluation(payload["evaluation"]) if payload.get("evaluation") else None
        ),
        timestamp=int(payload["timestamp"]),
    )


def decode_log(text: str) -> DecodedLog:
    """Parse a full session log (header line plus turn lines)."""
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise LogFormatError("empty session log")
    try:
        header = json.loads(lines[0])
        profile = StudentProfile(
            student_id=header["profile"]["student_id"],
            grade=int(header["profile"]["grade"]),
            confidence=Confidence(header["profile"]["confidence"]),
            attention=Attention(header["profile"]["attention"]),
            proficiency=Proficiency(header["profile"]["proficiency"]),
        )
        config = SessionConfig(
            max_turns=int(header["config"]["max_turns"]),
            guided_turns=int(header["config"]["guided_turns"]),
            vocab_turns=int(header["config"]["vocab_turns"]),
            story_turns=int(header["config"]["story_turns"]),
        )
        turns = tuple(_parse_turn(json.loads(line)) for line in lines[1:])
        return DecodedLog(
            session_id=header["session_id"],
            language=Language(header["language"]),
            profile=profile,
            scene_id=header["scene_id"],
            config=config,
            turns=turns,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise LogFormatError(f"malformed session log: {exc}") from exc


def encode_decoded(decoded: DecodedLog) -> str:
    """Re-encode a decoded log; inverse of :func:`decode_log` on canonical logs."""
    header = _dumps(
        {
            "session_id": decoded.session_id,
            "language": decoded.language.value,
            "profile": _profile_payload(decoded.profile),
            "scene_id": decoded.scene_id,
            "config": _config_payload(decoded.config),
        }
    )
    lines = [header]
    lines.extend(encode_turn(turn) for turn in decoded.turns)
    return "\n".join(lines) + "\n"
