"""Image-level structure: detections, event regions, and the scene graph."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from pictutor.core.types import Language
from pictutor.langeval.lexicon import LexiconEntry

Box = tuple[float, float, float, float]  # (x_min, y_min, x_max, y_max), normalized


class DetectionKind(str, Enum):
    PERSON = "Person"
    OBJECT = "Object"


@dataclass(frozen=True)
class Detection:
    """One pre-computed detection record with mean depth (0 = nearest)."""

    det_id: str
    label: str
    kind: DetectionKind
    box: Box
    depth: float
    confidence: float
    mask_area: float | None = None

    def __post_init__(self) -> None:
        x_min, y_min, x_max, y_max = self.box
        if not (0.0 <= x_min < x_max <= 1.0 and 0.0 <= y_min < y_max <= 1.0):
            raise ValueError(f"detection {self.det_id!r} has a degenerate box {self.box}")
        for name, value in (("depth", self.depth), ("confidence", self.confidence)):
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"detection {self.det_id!r}: {name} out of [0,1]")
        if self.mask_area is not None and not 0.0 <= self.mask_area <= 1.0:
            raise ValueError(f"detection {self.det_id!r}: mask_area out of [0,1]")


@dataclass(frozen=True)
class EventRegion:
    """A cluster of detections representing one activity of interest."""

    event_id: str
    member_ids: frozenset[str]
    box: Box
    salience: float
    caption: str | None = None

    def __post_init__(self) -> None:
        if not self.member_ids:
            raise ValueError(f"event {self.event_id!r} has no members")
        if not 0.0 <= self.salience <= 1.0:
            raise ValueError(f"event {self.event_id!r}: salience out of [0,1]")


@dataclass(frozen=True)
class ProposalParams:
    """Thresholds and salience weights for event proposal.

    Two detections link when (IoU >= iou_threshold OR center distance
    <= center_distance_threshold, in image-diagonal units) AND their
    depths differ by at most depth_threshold.
    """

    iou_threshold: float = 0.05
    center_distance_threshold: float = 0.15
    depth_threshold: float = 0.15
    min_salience: float = 0.1
    area_weight: float = 0.4
    proximity_weight: float = 0.4
    member_weight: float = 0.2

    def __post_init__(self) -> None:
        for name in ("iou_threshold", "center_distance_threshold", "depth_threshold", "min_salience"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} out of [0,1]: {value}")


@dataclass(frozen=True)
class SceneGraph:
    """One picture: detections, salience-ordered events, and per-event targets."""

    scene_id: str
    image_ref: str
    language: Language
    detections: tuple[Detection, ...]
    events: tuple[EventRegion, ...]
    global_narrative: str = ""
    targets: dict[str, tuple[LexiconEntry, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        order = [(-e.salience, e.event_id) for e in self.events]
        if order != sorted(order):
            raise ValueError("events must be sorted by descending salience, then event_id")
        seen: set[str] = set()
        known = {d.det_id for d in self.detections}
        for event in self.events:
            if not event.member_ids <= known:
                raise ValueError(f"event {event.event_id!r} references unknown detections")
            if event.member_ids & seen:
                raise ValueError(f"event {event.event_id!r} shares members with another event")
            seen |= event.member_ids

    def event(self, event_id: str) -> EventRegion | None:
        for event in self.events:
            if event.event_id == event_id:
                return event
        return None


def box_area(box: Box) -> float:
    return (box[2] - box[0]) * (box[3] - box[1])


def box_center(box: Box) -> tuple[float, float]:
    return ((box[0] + box[2]) / 2.0, (box[1] + box[3]) / 2.0)


def box_iou(a: Box, b: Box) -> float:
    ix = max(0.0, min(a[2], b[2]) - max(a[0], b[0]))
    iy = max(0.0, min(a[3], b[3]) - max(a[1], b[1]))
    inter = ix * iy
    if inter == 0.0:
        return 0.0
    return inter / (box_area(a) + box_area(b) - inter)


def center_distance(a: Box, b: Box) -> float:
    """Distance between box centers in units of the image diagonal."""
    (ax, ay), (bx, by) = box_center(a), box_center(b)
    return math.hypot(ax - bx, ay - by) / math.sqrt(2.0)


def union_box(boxes: list[Box]) -> Box:
    return (
        min(b[0] for b in boxes),
        min(b[1] for b in boxes),
        max(b[2] for b in boxes),
        max(b[3] for b in boxes),
    )
