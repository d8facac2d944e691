"""Event-region proposal over pre-computed detections.

Detections link pairwise by box overlap or center proximity, gated by
depth agreement; connected components of the link graph become events
when they contain at least one person or at least two objects. All
arithmetic runs over det_id-sorted members, so results are identical
under any input permutation.
"""

from __future__ import annotations

from pictutor.scene.types import (
    Detection,
    DetectionKind,
    EventRegion,
    ProposalParams,
    box_area,
    box_iou,
    center_distance,
    union_box,
)


def _linked(a: Detection, b: Detection, params: ProposalParams) -> bool:
    if abs(a.depth - b.depth) > params.depth_threshold:
        return False
    return (
        box_iou(a.box, b.box) >= params.iou_threshold
        or center_distance(a.box, b.box) <= params.center_distance_threshold
    )


class _UnionFind:
    def __init__(self, n: int) -> None:
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            # Smaller index wins so component roots are deterministic.
            if ri < rj:
                self.parent[rj] = ri
            else:
                self.parent[ri] = rj


def event_salience(members: list[Detection], params: ProposalParams) -> float:
    """Weighted mix of covered area, nearness, and member count, clamped to [0,1]."""
    box = union_box([d.box for d in members])
    mean_depth = sum(d.depth for d in members) / len(members)
    raw = (
        params.area_weight * box_area(box)
        + params.proximity_weight * (1.0 - mean_depth)
        + params.member_weight * min(1.0, len(members) / 4.0)
    )
    return max(0.0, min(1.0, raw))


def propose_events(
    detections: list[Detection], params: ProposalParams | None = None
) -> list[EventRegion]:
    """Cluster detections into salience-ranked event regions.

    Components with no person and fewer than two objects stay unassigned
    (a lone object is not an event), and events scoring below
    ``min_salience`` are dropped. Event ids are ``ev-`` plus the
    lexicographically lowest member det_id.
    """
    if params is None:
        params = ProposalParams()
    if not detections:
        return []
    dets = sorted(detections, key=lambda d: d.det_id)
    uf = _UnionFind(len(dets))
    for i in range(len(dets)):
        for j in range(i + 1, len(dets)):
            if _linked(dets[i], dets[j], params):
                uf.union(i, j)
    components: dict[int, list[Detection]] = {}
    for idx, det in enumerate(dets):
        components.setdefault(uf.find(idx), []).append(det)

    events: list[EventRegion] = []
    for members in components.values():
        persons = sum(1 for d in members if d.kind is DetectionKind.PERSON)
        objects = len(members) - persons
        if persons < 1 and objects < 2:
            continue
        salience = event_salience(members, params)
        if salience < params.min_salience:
            continue
        events.append(
            EventRegion(
                event_id="ev-" + members[0].det_id,
                member_ids=frozenset(d.det_id for d in members),
                box=union_box([d.box for d in members]),
                salience=salience,
            )
        )
    events.sort(key=lambda e: (-e.salience, e.event_id))
    return events
