"""Scene manifest files: pre-computed detections plus scene metadata.

Manifest schema (JSON): ``{scene_id, image_ref, language,
global_narrative, detections: [{det_id, label, kind, box: [4 floats],
depth, confidence, mask_area?}]}``. Events are not stored; they are
proposed from the detections at load time.
"""

from __future__ import annotations

import json
from pathlib import Path

from pictutor.core.types import Language
from pictutor.scene.proposal import propose_events
from pictutor.scene.types import Detection, DetectionKind, ProposalParams, SceneGraph


class ManifestError(ValueError):
    """Raised for unreadable or malformed scene manifests."""


def load_scene(path: str | Path, params: ProposalParams | None = None) -> SceneGraph:
    """Read one manifest and propose its event regions."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
        detections = tuple(
            Detection(
                det_id=item["det_id"],
                label=item["label"],
                kind=DetectionKind(item["kind"]),
                box=tuple(float(v) for v in item["box"]),
                depth=float(item["depth"]),
                confidence=float(item["confidence"]),
                mask_area=(
                    float(item["mask_area"]) if item.get("mask_area") is not None else None
                ),
            )
            for item in raw["detections"]
        )
        scene = SceneGraph(
            scene_id=raw["scene_id"],
            image_ref=raw["image_ref"],
            language=Language(raw["language"]),
            detections=detections,
            events=tuple(propose_events(list(detections), params)),
            global_narrative=raw.get("global_narrative", ""),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ManifestError(f"malformed scene manifest {path}: {exc}") from exc
    return scene


def load_scene_dir(
    directory: str | Path, params: ProposalParams | None = None
) -> dict[str, SceneGraph]:
    """Load every ``*.json`` manifest in a directory, keyed by scene_id."""
    scenes: dict[str, SceneGraph] = {}
    for path in sorted(Path(directory).glob("*.json")):
        scene = load_scene(path, params)
        if scene.scene_id in scenes:
            raise ManifestError(f"duplicate scene_id {scene.scene_id!r} in {directory}")
        scenes[scene.scene_id] = scene
    return scenes
