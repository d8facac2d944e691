"""Service configuration: ``KEY=VALUE`` file, environment overrides.

Recognized keys (environment variables use the same names with a
``PICTUTOR_`` prefix and take precedence over the file):

    DATA_DIR, MEDIA_DIR, SCENE_DIR, LEXICON_DIR, UI_DIR
    MAX_TURNS, GUIDED_TURNS, VOCAB_TURNS, STORY_TURNS
    IOU_THRESHOLD, CENTER_DISTANCE_THRESHOLD, DEPTH_THRESHOLD, MIN_SALIENCE
    ASR_URL, GENERATE_URL, CAPTION_URL, TTS_URL
    ADAPTER_DEADLINE_S, ADAPTER_RETRIES, ADAPTER_BACKOFF_S, ADAPTER_CONCURRENCY
    HOST, PORT

When no adapter URLs are set the service runs with the deterministic
in-process mocks (demo mode forces this and the bundled fixture data).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

from pictutor.core.types import SessionConfig
from pictutor.scene.types import ProposalParams

ENV_PREFIX = "PICTUTOR_"


class ConfigError(ValueError):
    """Raised when the configuration is unreadable or fails validation."""


@dataclass(frozen=True)
class ServiceConfig:
    data_dir: Path
    scene_dir: Path
    lexicon_dir: Path
    media_dir: Path
    ui_dir: Path | None = None
    session: SessionConfig = field(default_factory=SessionConfig)
    proposal: ProposalParams = field(default_factory=ProposalParams)
    asr_url: str | None = None
    generate_url: str | None = None
    caption_url: str | None = None
    tts_url: str | None = None
    adapter_deadline_s: float = 10.0
    adapter_retries: int = 2
    adapter_backoff_s: float = 0.25
    adapter_concurrency: int = 8
    host: str = "127.0.0.1"
    port: int = 8000

    @property
    def use_mock_adapters(self) -> bool:
        return not any(
            (self.asr_url, self.generate_url, self.caption_url, self.tts_url)
        )

    def validate(self) -> None:
        for name in ("scene_dir", "lexicon_dir"):
            path = getattr(self, name)
            if not path.is_dir():
                raise ConfigError(f"{name} does not resolve to a directory: {path}")
        if self.ui_dir is not None and not self.ui_dir.is_dir():
            raise ConfigError(f"UI_DIR does not resolve to a directory: {self.ui_dir}")
        if self.adapter_retries < 0 or self.adapter_concurrency < 1:
            raise ConfigError("adapter retry/concurrency settings out of range")
        urls = (self.asr_url, self.generate_url, self.caption_url, self.tts_url)
        if any(urls) and not all(urls):
            raise ConfigError("set either all four adapter URLs or none")


def _parse_kv_file(path: Path) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected KEY=VALUE, got {raw!r}")
        key, _, value = line.partition("=")
        values[key.strip().upper()] = value.strip()
    return values


def _collect(values: dict[str, str], environ: dict[str, str]) -> dict[str, str]:
    merged = dict(values)
    for key, value in environ.items():
        if key.startswith(ENV_PREFIX):
            merged[key[len(ENV_PREFIX):].upper()] = value
    return merged


def bundled_data_path(*parts: str) -> Path:
    return Path(str(resources.files("pictutor.data").joinpath(*parts)))


def load_config(
    path: str | Path | None = None, environ: dict[str, str] | None = None
) -> ServiceConfig:
    """Build the configuration from an optional file plus the environment."""
    values = _parse_kv_file(Path(path)) if path is not None else {}
    merged = _collect(values, os.environ if environ is None else environ)

    def _get(key: str, default: str) -> str:
        return merged.get(key, default)

    try:
        data_dir = Path(_get("DATA_DIR", "./data"))
        config = ServiceConfig(
            data_dir=data_dir,
            scene_dir=Path(_get("SCENE_DIR", str(bundled_data_path("scenes")))),
            lexicon_dir=Path(_get("LEXICON_DIR", str(bundled_data_path("lexicons")))),
            media_dir=Path(_get("MEDIA_DIR", str(data_dir / "media"))),
            ui_dir=Path(merged["UI_DIR"]) if merged.get("UI_DIR") else None,
            session=SessionConfig(
                max_turns=int(_get("MAX_TURNS", "30")),
                guided_turns=int(_get("GUIDED_TURNS", "12")),
                vocab_turns=int(_get("VOCAB_TURNS", "6")),
                story_turns=int(_get("STORY_TURNS", "6")),
            ),
            proposal=ProposalParams(
                iou_threshold=float(_get("IOU_THRESHOLD", "0.05")),
                center_distance_threshold=float(_get("CENTER_DISTANCE_THRESHOLD", "0.15")),
                depth_threshold=float(_get("DEPTH_THRESHOLD", "0.15")),
                min_salience=float(_get("MIN_SALIENCE", "0.1")),
            ),
            asr_url=merged.get("ASR_URL"),
            generate_url=merged.get("GENERATE_URL"),
            caption_url=merged.get("CAPTION_URL"),
            tts_url=merged.get("TTS_URL"),
            adapter_deadline_s=float(_get("ADAPTER_DEADLINE_S", "10")),
            adapter_retries=int(_get("ADAPTER_RETRIES", "2")),
            adapter_backoff_s=float(_get("ADAPTER_BACKOFF_S", "0.25")),
            adapter_concurrency=int(_get("ADAPTER_CONCURRENCY", "8")),
            host=_get("HOST", "127.0.0.1"),
            port=int(_get("PORT", "8000")),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid configuration value: {exc}") from exc
    return config


def demo_config(data_dir: str | Path = "./demo-data") -> ServiceConfig:
    """Mock adapters plus the bundled fixture scenes and lexicons."""
    data_dir = Path(data_dir)
    return ServiceConfig(
        data_dir=data_dir,
        scene_dir=bundled_data_path("scenes"),
        lexicon_dir=bundled_data_path("lexicons"),
        media_dir=data_dir / "media",
    )
