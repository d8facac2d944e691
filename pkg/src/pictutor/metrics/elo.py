"""Sequential Elo ratings and raw win rates over pairwise judgments."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

DEFAULT_K = 32.0
DEFAULT_INITIAL = 1500.0


class Winner(str, Enum):
    A = "A"
    B = "B"
    TIE = "Tie"


@dataclass(frozen=True)
class JudgeRecord:
    model_a: str
    model_b: str
    winner: Winner


def expected_score(rating_a: float, rating_b: float) -> float:
    return 1.0 / (1.0 + 10.0 ** ((rating_b - rating_a) / 400.0))


def elo_ratings(
    records: Sequence[JudgeRecord],
    k: float = DEFAULT_K,
    initial: float = DEFAULT_INITIAL,
    models: Iterable[str] = (),
) -> dict[str, float]:
    """Apply the records in order; order matters by design.

    ``models`` pre-registers ids so they appear in the result (at the
    initial rating) even with no games played.
    """
    ratings: dict[str, float] = {m: initial for m in models}
    for record in records:
        r_a = ratings.setdefault(record.model_a, initial)
        r_b = ratings.setdefault(record.model_b, initial)
        e_a = expected_score(r_a, r_b)
        e_b = expected_score(r_b, r_a)
        if record.winner is Winner.A:
            s_a, s_b = 1.0, 0.0
        elif record.winner is Winner.B:
            s_a, s_b = 0.0, 1.0
        else:
            s_a = s_b = 0.5
        ratings[record.model_a] = r_a + k * (s_a - e_a)
        ratings[record.model_b] = r_b + k * (s_b - e_b)
    return ratings


def win_rates(
    records: Sequence[JudgeRecord], models: Iterable[str] = ()
) -> dict[str, dict[str, float]]:
    """Raw per-model wins/losses/ties with ties counting half a win."""
    stats: dict[str, dict[str, float]] = {
        m: {"wins": 0, "losses": 0, "ties": 0} for m in models
    }
    for record in records:
        for model in (record.model_a, record.model_b):
            stats.setdefault(model, {"wins": 0, "losses": 0, "ties": 0})
        if record.winner is Winner.TIE:
            stats[record.model_a]["ties"] += 1
            stats[record.model_b]["ties"] += 1
        else:
            winner = record.model_a if record.winner is Winner.A else record.model_b
            loser = record.model_b if record.winner is Winner.A else record.model_a
            stats[winner]["wins"] += 1
            stats[loser]["losses"] += 1
    out: dict[str, dict[str, float]] = {}
    for model, row in stats.items():
        games = row["wins"] + row["losses"] + row["ties"]
        rate = (row["wins"] + 0.5 * row["ties"]) / games if games else 0.0
        out[model] = {**row, "games": games, "win_rate": rate}
    return out
