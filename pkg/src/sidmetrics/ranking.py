"""Friendly-neighbor tables: per-target rankings and Borda-vote aggregation.

Sources are ranked per metric by ascending value. The cumulative signed
distance is special: negative values mark under-diverse sources, so they are
demoted below every non-negative source and ordered among themselves by
absolute value. Voting is a Borda count; a source ranked k-th among K
participants earns K - k points per metric, missing metrics earn nothing.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import EmptyRankingError, FormatError, UnknownNameError

METRIC_NAMES = ("fid", "kid", "csid", "min_sin")

_TRUTHY = {"1", "true", "yes", "y"}


@dataclass
class MetricTable:
    """Sparse (source, target) -> metric values, plus excluded pairs."""

    cells: dict[tuple[str, str], dict[str, float]] = field(default_factory=dict)
    exclusions: dict[tuple[str, str], str] = field(default_factory=dict)

    def set_value(self, source: str, target: str, metric: str, value: float) -> None:
        if metric not in METRIC_NAMES:
            raise UnknownNameError(f"unknown metric {metric!r}; have {METRIC_NAMES}")
        self.cells.setdefault((source, target), {})[metric] = float(value)

    def exclude(self, source: str, target: str, reason: str) -> None:
        self.exclusions[(source, target)] = reason

    def targets(self) -> list[str]:
        return sorted({t for _, t in self.cells})

    def sources(self) -> list[str]:
        return sorted({s for s, _ in self.cells})


@dataclass(frozen=True)
class RankedSource:
    source: str
    borda_score: int
    per_metric_rank: dict[str, int]
    flags: tuple[str, ...] = ()


@dataclass(frozen=True)
class RankingResult:
    """Sources ordered by descending Borda score, ties broken by label."""

    target: str
    ordered_sources: tuple[RankedSource, ...]
    method: str


def _participants(table: MetricTable, target: str, metrics: tuple[str, ...]) -> list[str]:
    if target not in {t for _, t in table.cells}:
        raise UnknownNameError(f"unknown target {target!r}")
    out = []
    for (src, tgt), values in table.cells.items():
        if tgt != target or src == target:
            continue
        if (src, tgt) in table.exclusions:
            continue
        if any(m in values for m in metrics):
            out.append(src)
    return sorted(out)


def _metric_order(table: MetricTable, target: str, metric: str, sources: list[str]) -> list[str]:
    """Sources holding ``metric``, ascending; negative csid demoted, ties by label."""

    def key(src: str):
        value = table.cells[(src, target)][metric]
        if metric == "csid":
            return (1 if value < 0 else 0, abs(value), src)
        return (0, value, src)

    having = [s for s in sources if metric in table.cells[(s, target)]]
    return sorted(having, key=key)


def rank_single(table: MetricTable, target: str, metric: str) -> RankingResult:
    """Rank every non-excluded source for ``target`` by one metric."""
    if metric not in METRIC_NAMES:
        raise UnknownNameError(f"unknown metric {metric!r}; have {METRIC_NAMES}")
    participants = _participants(table, target, (metric,))
    ordered = _metric_order(table, target, metric, participants)
    if not ordered:
        raise EmptyRankingError(f"no source carries {metric!r} for target {target!r}")
    k = len(ordered)
    rows = []
    for pos, src in enumerate(ordered, start=1):
        value = table.cells[(src, target)][metric]
        flags = ("negative-csid",) if metric == "csid" and value < 0 else ()
        rows.append(RankedSource(src, k - pos, {metric: pos}, flags))
    return RankingResult(target, tuple(rows), method=f"single:{metric}")


def rank_vote(table: MetricTable, target: str, metrics: list[str]) -> RankingResult:
    """Borda-count aggregation across ``metrics`` with equal weights."""
    if not metrics:
        raise UnknownNameError("vote needs at least one metric")
    for metric in metrics:
        if metric not in METRIC_NAMES:
            raise UnknownNameError(f"unknown metric {metric!r}; have {METRIC_NAMES}")
    participants = _participants(table, target, tuple(metrics))
    if not participants:
        raise EmptyRankingError(
            f"no source carries any of {metrics} for target {target!r}"
        )
    scores = {src: 0 for src in participants}
    positions: dict[str, dict[str, int]] = {src: {} for src in participants}
    flags: dict[str, set[str]] = {src: set() for src in participants}
    for metric in metrics:
        ordered = _metric_order(table, target, metric, participants)
        k = len(ordered)
        for pos, src in enumerate(ordered, start=1):
            scores[src] += k - pos
            positions[src][metric] = pos
            if metric == "csid" and table.cells[(src, target)]["csid"] < 0:
                flags[src].add("negative-csid")
    ranked = sorted(participants, key=lambda s: (-scores[s], s))
    rows = tuple(
        RankedSource(src, scores[src], positions[src], tuple(sorted(flags[src])))
        for src in ranked
    )
    return RankingResult(target, rows, method="vote:" + ",".join(metrics))


def read_metric_table(path: str | Path) -> MetricTable:
    """Load a table from CSV columns source,target,metric,value[,excluded,reason]."""
    table = MetricTable()
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise FormatError("metric table CSV is empty", field="header")
        missing = {"source", "target"} - set(reader.fieldnames)
        if missing:
            raise FormatError(f"metric table lacks columns {sorted(missing)}", field="header")
        for i, row in enumerate(reader):
            src = (row.get("source") or "").strip()
            tgt = (row.get("target") or "").strip()
            if not src or not tgt:
                raise FormatError(f"row {i} lacks source/target", field="row")
            if (row.get("excluded") or "").strip().lower() in _TRUTHY:
                table.exclude(src, tgt, (row.get("reason") or "unspecified").strip())
                if not (row.get("metric") or "").strip():
                    continue
            metric = (row.get("metric") or "").strip()
            raw = (row.get("value") or "").strip()
            if not metric:
                raise FormatError(f"row {i} lacks a metric name", field="row")
            try:
                value = float(raw)
            except ValueError as exc:
                raise FormatError(f"row {i} value {raw!r} is not a number", field="row") from exc
            if not math.isfinite(value) and metric != "min_sin":
                raise FormatError(f"row {i} value {raw!r} must be finite", field="row")
            table.set_value(src, tgt, metric, value)
    return table


def ranking_to_csv(result: RankingResult) -> str:
    metrics = sorted({m for row in result.ordered_sources for m in row.per_metric_rank})
    header = ["rank", "source", "borda"] + [f"{m}_rank" for m in metrics] + ["flags"]
    lines = [",".join(header)]
    for rank, row in enumerate(result.ordered_sources, start=1):
        cells = [str(rank), row.source, str(row.borda_score)]
        cells += [str(row.per_metric_rank.get(m, "")) for m in metrics]
        cells.append(";".join(row.flags))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def ranking_to_dict(result: RankingResult) -> dict:
    return {
        "target": result.target,
        "method": result.method,
        "ranking": [
            {
                "rank": rank,
                "source": row.source,
                "borda": row.borda_score,
                "per_metric_rank": row.per_metric_rank,
                "flags": list(row.flags),
            }
            for rank, row in enumerate(result.ordered_sources, start=1)
        ],
    }


def ranking_to_json(result: RankingResult) -> str:
    return json.dumps(ranking_to_dict(result), indent=2, sort_keys=True)
