from __future__ import annotations

import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pictutor.core.types import (
    Attention,
    Confidence,
    Language,
    Proficiency,
    StudentProfile,
)
from pictutor.langeval.lexicon import Generality, LexiconEntry, VocabularyHierarchy
from pictutor.scene.types import Detection, DetectionKind
from pictutor.service.config import demo_config
from pictutor.service.engine import TutorEngine


def entry(
    key: str,
    *surfaces: str,
    specific: bool = False,
    parent: str | None = None,
    language: Language = Language.EN,
) -> LexiconEntry:
    return LexiconEntry(
        key=key,
        language=language,
        surface_forms=surfaces or (key,),
        generality=Generality.SPECIFIC if specific else Generality.GENERAL,
        parent_key=parent,
    )


def detection(
    det_id: str,
    kind: DetectionKind = DetectionKind.OBJECT,
    box=(0.1, 0.1, 0.3, 0.3),
    depth: float = 0.5,
    label: str | None = None,
) -> Detection:
    return Detection(
        det_id=det_id,
        label=label or det_id,
        kind=kind,
        box=tuple(box),
        depth=depth,
        confidence=0.9,
    )


def random_detections(rng: random.Random, count: int) -> list[Detection]:
    dets = []
    for i in range(count):
        x_min = rng.uniform(0.0, 0.85)
        y_min = rng.uniform(0.0, 0.85)
        x_max = x_min + rng.uniform(0.02, 1.0 - x_min)
        y_max = y_min + rng.uniform(0.02, 1.0 - y_min)
        dets.append(
            Detection(
                det_id=f"r{i:02d}",
                label=f"thing{i}",
                kind=rng.choice([DetectionKind.PERSON, DetectionKind.OBJECT]),
                box=(x_min, y_min, x_max, y_max),
                depth=rng.random(),
                confidence=rng.random(),
            )
        )
    return dets


@pytest.fixture
def play_hierarchy() -> VocabularyHierarchy:
    return VocabularyHierarchy.from_entries(
        [
            entry("playing", "playing", "play", "plays"),
            entry("swimming", "swimming", "swim", "swims", specific=True, parent="playing"),
            entry("climbing", "climbing", "climb", "climbs", specific=True, parent="playing"),
            entry("pool", "pool"),
            entry("boy", "boy", "boys"),
            entry("ball", "ball"),
        ]
    )


@pytest.fixture
def profile() -> StudentProfile:
    return StudentProfile(
        student_id="stu-1",
        grade=1,
        confidence=Confidence.MEDIUM,
        attention=Attention.STEADY,
        proficiency=Proficiency.BEGINNER,
    )


@pytest.fixture
def low_confidence_profile() -> StudentProfile:
    return StudentProfile(
        student_id="stu-2",
        grade=1,
        confidence=Confidence.LOW,
        attention=Attention.DISTRACTIBLE,
        proficiency=Proficiency.BEGINNER,
    )


@pytest.fixture
def demo_engine(tmp_path) -> TutorEngine:
    return TutorEngine(demo_config(tmp_path / "data"))


@pytest.fixture
def engine_factory(tmp_path):
    counter = {"n": 0}

    def make(adapters=None, data_dir=None) -> TutorEngine:
        counter["n"] += 1
        root = Path(data_dir) if data_dir else tmp_path / f"data{counter['n']}"
        return TutorEngine(demo_config(root), adapters=adapters)

    return make
