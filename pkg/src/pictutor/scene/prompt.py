"""Caption prompt assembly for event regions."""

from __future__ import annotations

from pictutor.scene.types import EventRegion, SceneGraph

NO_NARRATIVE = "(no narrative)"


class UnknownEvent(KeyError):
    """The event does not belong to the given scene."""


def assemble_caption_prompt(scene: SceneGraph, event: EventRegion) -> str:
    """Build the captioning prompt for one event region.

    Output is byte-identical for identical inputs: narrative first, then
    the member labels and the normalized region box, then the writing
    instruction. Member labels appear in det_id order.
    """
    if scene.event(event.event_id) is None:
        raise UnknownEvent(f"event {event.event_id!r} is not part of scene {scene.scene_id!r}")
    narrative = scene.global_narrative or NO_NARRATIVE
    members = sorted(
        (d for d in scene.detections if d.det_id in event.member_ids),
        key=lambda d: d.det_id,
    )
    labels = ", ".join(d.label for d in members)
    x_min, y_min, x_max, y_max = event.box
    return (
        f"Narrative: {narrative}\n"
        f"Event {event.event_id} members: {labels}\n"
        f"Region box: ({x_min:.3f}, {y_min:.3f}, {x_max:.3f}, {y_max:.3f})\n"
        "Describe the objects, characters, and activities in this region in one or two "
        "sentences, staying consistent with the narrative."
    )
