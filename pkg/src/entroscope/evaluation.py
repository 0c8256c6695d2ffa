"""Detection-quality statistics: AUC, ROC, F1 at the Youden threshold, and
the dual-stage quantile analysis used to separate co-occurring contamination
sources.

Score orientation everywhere: higher score means "more likely contaminated"
and the member class is positive.
"""

from __future__ import annotations

import csv
import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DomainError

MEMBER = "member"
NONMEMBER = "nonmember"


@dataclass(frozen=True)
class EvalReport:
    detector: str
    auc: float
    roc: tuple[tuple[float, float], ...]
    youden_threshold: float
    f1_at_youden: float
    n_members: int
    n_nonmembers: int

    def to_jsonable(self) -> dict:
        return {
            "detector": self.detector,
            "auc": self.auc,
            "roc": [[fpr, tpr] for fpr, tpr in self.roc],
            "youden_threshold": self.youden_threshold,
            "f1_at_youden": self.f1_at_youden,
            "n_members": self.n_members,
            "n_nonmembers": self.n_nonmembers,
        }


@dataclass(frozen=True)
class DualStageConfig:
    aux_detector: str = "ppl"
    quantiles: tuple[float, ...] = (1.0, 0.9, 0.8, 0.6, 0.3, 0.1)
    control_seed: int = 20250901

    def __post_init__(self):
        if not self.quantiles:
            raise DomainError("quantiles must be non-empty")
        if list(self.quantiles) != sorted(self.quantiles, reverse=True):
            raise DomainError("quantiles must be sorted descending")
        for q in self.quantiles:
            if not 0.0 < q <= 1.0:
                raise DomainError(f"quantile {q} outside (0, 1]")


def _split_classes(scores: list[tuple[float, str]]) -> tuple[list[float], list[float]]:
    pos = [s for s, lab in scores if lab == MEMBER]
    neg = [s for s, lab in scores if lab == NONMEMBER]
    if not pos or not neg:
        raise DomainError("need at least one member and one nonmember")
    return pos, neg


def auc(scores: list[tuple[float, str]]) -> float:
    """Mann-Whitney AUC: P(member score > nonmember score), ties counted 0.5."""
    pos, neg = _split_classes(scores)
    # Average ranks over the pooled sample; rank-sum form of the U statistic.
    pooled = sorted((s, i < len(pos)) for i, s in enumerate(pos + neg))
    ranks: list[float] = [0.0] * len(pooled)
    i = 0
    while i < len(pooled):
        j = i
        while j + 1 < len(pooled) and pooled[j + 1][0] == pooled[i][0]:
            j += 1
        avg_rank = (i + j) / 2.0 + 1.0
        for t in range(i, j + 1):
            ranks[t] = avg_rank
        i = j + 1
    rank_sum_pos = math.fsum(r for r, (_, is_pos) in zip(ranks, pooled) if is_pos)
    n_pos, n_neg = len(pos), len(neg)
    u = rank_sum_pos - n_pos * (n_pos + 1) / 2.0
    return u / (n_pos * n_neg)


def roc_curve(scores: list[tuple[float, str]]) -> list[tuple[float, float]]:
    """ROC points swept over the distinct score values, descending.

    Starts at (0, 0), ends at (1, 1); the trapezoidal area over the points
    equals the pair-counting AUC.
    """
    pos, neg = _split_classes(scores)
    n_pos, n_neg = len(pos), len(neg)
    ordered = sorted(scores, key=lambda t: t[0], reverse=True)
    points = [(0.0, 0.0)]
    tp = fp = 0
    i = 0
    while i < len(ordered):
        j = i
        while j + 1 < len(ordered) and ordered[j + 1][0] == ordered[i][0]:
            j += 1
        for t in range(i, j + 1):
            if ordered[t][1] == MEMBER:
                tp += 1
            else:
                fp += 1
        points.append((fp / n_neg, tp / n_pos))
        i = j + 1
    return points


def trapezoid_area(points: list[tuple[float, float]]) -> float:
    return math.fsum(
        (x1 - x0) * (y0 + y1) / 2.0
        for (x0, y0), (x1, y1) in zip(points, points[1:])
    )


def youden_f1(scores: list[tuple[float, str]]) -> tuple[float, float]:
    """Threshold maximizing J = TPR - FPR, and the F1 score at it.

    Candidate thresholds are the observed score values; the decision rule is
    "member iff score >= threshold". Ties in J prefer the higher TPR, then
    the higher threshold.
    """
    pos, neg = _split_classes(scores)
    n_pos, n_neg = len(pos), len(neg)
    best: tuple[float, float, float] | None = None  # (J, TPR, threshold)
    best_f1 = 0.0
    for threshold in sorted({s for s, _ in scores}, reverse=True):
        tp = sum(1 for s in pos if s >= threshold)
        fp = sum(1 for s in neg if s >= threshold)
        tpr = tp / n_pos
        fpr = fp / n_neg
        j = tpr - fpr
        key = (j, tpr, threshold)
        if best is None or key > best:
            best = key
            fn = n_pos - tp
            denom = 2 * tp + fp + fn
            best_f1 = 2 * tp / denom if denom else 0.0
    assert best is not None
    return best[2], best_f1


def quantile_subset(items: list[str], aux_scores: dict[str, float], q: float) -> list[str]:
    """Ids of the max(1, floor(q*n)) items with the lowest aux scores.

    Ties are broken by ascending item id so the subset is stable.
    """
    if not 0.0 < q <= 1.0:
        raise DomainError(f"quantile {q} outside (0, 1]")
    missing = [i for i in items if i not in aux_scores]
    if missing:
        raise DomainError(f"missing aux score for items: {missing[:5]}")
    size = max(1, math.floor(q * len(items)))
    ranked = sorted(items, key=lambda i: (aux_scores[i], i))
    return ranked[:size]


def random_control_subset(items: list[str], size: int, seed: int) -> list[str]:
    """Seeded uniform sample without replacement, preserving item order."""
    if not 1 <= size <= len(items):
        raise DomainError(f"subset size {size} outside [1, {len(items)}]")
    rng = random.Random(seed)
    chosen = set(rng.sample(range(len(items)), size))
    return [item for idx, item in enumerate(items) if idx in chosen]


@dataclass(frozen=True)
class DualStageRow:
    q: float
    auc_filtered: float | None
    auc_control: float | None
    auc_aux: float | None


def _subset_auc(scores: dict[str, float], labels: dict[str, str], ids: list[str]) -> float | None:
    pairs = [(scores[i], labels[i]) for i in ids]
    try:
        return auc(pairs)
    except DomainError:
        return None  # single-class subset: undefined, reported as null


def dual_stage_report(
    scores_main: dict[str, float],
    scores_aux: dict[str, float],
    labels: dict[str, str],
    cfg: DualStageConfig,
) -> list[DualStageRow]:
    """Per-quantile AUC of the main detector on the low-aux subset, on a
    size-matched random control subset, and of the aux detector on the same
    low-aux subset."""
    items = sorted(labels)
    for name, scores in (("main", scores_main), ("aux", scores_aux)):
        missing = [i for i in items if i not in scores]
        if missing:
            raise DomainError(f"missing {name} score for items: {missing[:5]}")
    rows = []
    for q in cfg.quantiles:
        subset = quantile_subset(items, scores_aux, q)
        control = random_control_subset(items, len(subset), cfg.control_seed)
        rows.append(
            DualStageRow(
                q=q,
                auc_filtered=_subset_auc(scores_main, labels, subset),
                auc_control=_subset_auc(scores_main, labels, control),
                auc_aux=_subset_auc(scores_aux, labels, subset),
            )
        )
    return rows


def evaluate_detector(
    detector: str, scores: dict[str, float], labels: dict[str, str]
) -> EvalReport:
    pairs = [(scores[i], labels[i]) for i in sorted(labels) if i in scores]
    roc = roc_curve(pairs)
    threshold, f1 = youden_f1(pairs)
    return EvalReport(
        detector=detector,
        auc=auc(pairs),
        roc=tuple(roc),
        youden_threshold=threshold,
        f1_at_youden=f1,
        n_members=sum(1 for _, lab in pairs if lab == MEMBER),
        n_nonmembers=sum(1 for _, lab in pairs if lab == NONMEMBER),
    )


@dataclass
class HistogramData:
    bin_edges: list[float] = field(default_factory=list)
    count_member: list[int] = field(default_factory=list)
    count_nonmember: list[int] = field(default_factory=list)


def score_histogram(
    scores: dict[str, float], labels: dict[str, str], bins: int = 20
) -> HistogramData:
    """Class-split counts over equal-width bins spanning the score range."""
    if bins < 1:
        raise DomainError(f"bins must be >= 1, got {bins}")
    values = [scores[i] for i in sorted(labels) if i in scores]
    if not values:
        raise DomainError("no scores to histogram")
    lo, hi = min(values), max(values)
    if lo == hi:
        hi = lo + 1.0
    width = (hi - lo) / bins
    hist = HistogramData(bin_edges=[lo + width * b for b in range(bins + 1)])
    hist.count_member = [0] * bins
    hist.count_nonmember = [0] * bins
    for item in sorted(labels):
        if item not in scores:
            continue
        b = min(int((scores[item] - lo) / width), bins - 1)
        if labels[item] == MEMBER:
            hist.count_member[b] += 1
        else:
            hist.count_nonmember[b] += 1
    return hist


def write_report_json(report: EvalReport, path: Path) -> None:
    path.write_text(json.dumps(report.to_jsonable(), indent=2) + "\n", encoding="utf-8")


def write_histogram_csv(hist: HistogramData, path: Path) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["bin_left", "bin_right", "count_member", "count_nonmember"])
        for b in range(len(hist.count_member)):
            writer.writerow(
                [
                    f"{hist.bin_edges[b]:.9f}",
                    f"{hist.bin_edges[b + 1]:.9f}",
                    hist.count_member[b],
                    hist.count_nonmember[b],
                ]
            )


def write_dual_stage_csv(rows: list[DualStageRow], path: Path) -> None:
    def cell(v: float | None) -> str:
        return "null" if v is None else f"{v:.9f}"

    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["q", "auc_filtered", "auc_control", "auc_aux"])
        for row in rows:
            writer.writerow(
                [row.q, cell(row.auc_filtered), cell(row.auc_control), cell(row.auc_aux)]
            )
