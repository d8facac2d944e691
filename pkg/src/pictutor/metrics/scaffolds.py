"""Scaffolding-type distribution analytics over session logs.

Cohort assignment is an input (a sidecar CSV mapping session_id to
cohort), never computed here.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Sequence

from pictutor.core.sessionlog import LogFormatError, decode_log
from pictutor.core.types import ScaffoldingType, Speaker


class Cohort(str, Enum):
    HIGH_PERFORMING = "HighPerforming"
    LOW_PERFORMING = "LowPerforming"


@dataclass(frozen=True)
class UtteranceLabel:
    session_id: str
    cohort: Cohort
    scaffold: ScaffoldingType


def scaffolding_distribution(
    labels: Sequence[UtteranceLabel],
) -> dict[Cohort, dict[ScaffoldingType, float]]:
    """Per cohort, the percentage of utterances per scaffolding type.

    Both cohorts and all seven types always appear; a cohort with zero
    utterances maps every type to 0.
    """
    counts = {cohort: {kind: 0 for kind in ScaffoldingType} for cohort in Cohort}
    totals = {cohort: 0 for cohort in Cohort}
    for label in labels:
        counts[label.cohort][label.scaffold] += 1
        totals[label.cohort] += 1
    return {
        cohort: {
            kind: (100.0 * count / totals[cohort] if totals[cohort] else 0.0)
            for kind, count in counts[cohort].items()
        }
        for cohort in Cohort
    }


def load_cohort_csv(path: str | Path) -> dict[str, Cohort]:
    """Read the ``session_id,cohort`` sidecar file (header row required)."""
    assignments: dict[str, Cohort] = {}
    with open(path, newline="", encoding="utf-8") as handle:
        for row in csv.DictReader(handle):
            assignments[row["session_id"]] = Cohort(row["cohort"])
    return assignments


def labels_from_logs(
    log_dir: str | Path, cohorts: dict[str, Cohort]
) -> tuple[list[UtteranceLabel], list[str]]:
    """Extract one label per scaffolded tutor turn from every log in a
    directory; returns (labels, session ids skipped for lack of a cohort)."""
    labels: list[UtteranceLabel] = []
    skipped: list[str] = []
    for path in sorted(Path(log_dir).glob("*.jsonl")):
        try:
            decoded = decode_log(path.read_text(encoding="utf-8"))
        except LogFormatError:
            skipped.append(path.stem)
            continue
        cohort = cohorts.get(decoded.session_id)
        if cohort is None:
            skipped.append(decoded.session_id)
            continue
        for turn in decoded.turns:
            if turn.speaker is Speaker.TUTOR and turn.scaffold is not None:
                labels.append(UtteranceLabel(decoded.session_id, cohort, turn.scaffold))
    return labels, skipped


def build_report(labels: Sequence[UtteranceLabel], skipped: Sequence[str] = ()) -> dict:
    """JSON-ready analytics report with counts and percentages per cohort."""
    distribution = scaffolding_distribution(labels)
    counts = {cohort: {kind: 0 for kind in ScaffoldingType} for cohort in Cohort}
    for label in labels:
        counts[label.cohort][label.scaffold] += 1
    return {
        "total_labels": len(labels),
        "skipped_sessions": list(skipped),
        "cohorts": {
            cohort.value: {
                "total": sum(counts[cohort].values()),
                "counts": {kind.value: counts[cohort][kind] for kind in ScaffoldingType},
                "percentages": {
                    kind.value: distribution[cohort][kind] for kind in ScaffoldingType
                },
            }
            for cohort in Cohort
        },
    }
