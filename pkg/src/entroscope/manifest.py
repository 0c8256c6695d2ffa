"""Detection items and construction of contaminated training/detection splits.

Manifests are JSON Lines, UTF-8, one object per line. A detection record
carries ``id``, ``question``, ``label``, ``source``, ``meta``; a train record
carries ``item_id``, ``question``, ``occurrence_index``.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ParseError, ValidationError

LABEL_MEMBER = "member"
LABEL_NONMEMBER = "nonmember"
LABEL_UNKNOWN = "unknown"
VALID_LABELS = frozenset({LABEL_MEMBER, LABEL_NONMEMBER, LABEL_UNKNOWN})


@dataclass(frozen=True)
class DetectionItem:
    id: str
    question: str
    label: str = LABEL_UNKNOWN
    source: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.id:
            raise ValidationError("item id must be non-empty")
        if not self.question:
            raise ValidationError(f"item {self.id!r}: question must be non-empty")
        if self.label not in VALID_LABELS:
            raise ValidationError(
                f"item {self.id!r}: label {self.label!r} not one of {sorted(VALID_LABELS)}"
            )


@dataclass(frozen=True)
class TrainRecord:
    item_id: str
    question: str
    occurrence_index: int

    def __post_init__(self):
        if self.occurrence_index < 1:
            raise ValidationError(
                f"train record {self.item_id!r}: occurrence_index must be >= 1"
            )


@dataclass(frozen=True)
class InjectionConfig:
    fraction: float
    occurrences: int
    seed: int

    def __post_init__(self):
        if not 0.0 < self.fraction <= 1.0:
            raise ValidationError(f"fraction {self.fraction} outside (0, 1]")
        if self.occurrences < 1:
            raise ValidationError(f"occurrences must be >= 1, got {self.occurrences}")


def load_manifest(path: str | Path) -> list[DetectionItem]:
    """Read a JSONL detection manifest; duplicate ids are rejected."""
    path = Path(path)
    items: list[DetectionItem] = []
    seen: set[str] = set()
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc.msg}", line=lineno) from exc
            if not isinstance(record, dict):
                raise ParseError("record is not a JSON object", line=lineno)
            try:
                item = DetectionItem(
                    id=str(record["id"]),
                    question=record["question"],
                    label=record.get("label", LABEL_UNKNOWN),
                    source=record.get("source", ""),
                    meta=record.get("meta", {}),
                )
            except KeyError as exc:
                raise ParseError(f"missing field {exc.args[0]!r}", line=lineno) from exc
            except ValidationError as exc:
                raise ParseError(str(exc), line=lineno) from exc
            if item.id in seen:
                raise ValidationError(f"duplicate item id {item.id!r}")
            seen.add(item.id)
            items.append(item)
    return items


def save_manifest(items: list[DetectionItem], path: str | Path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for item in items:
            fh.write(
                json.dumps(
                    {
                        "id": item.id,
                        "question": item.question,
                        "label": item.label,
                        "source": item.source,
                        "meta": item.meta,
                    },
                    ensure_ascii=False,
                    sort_keys=False,
                )
                + "\n"
            )


def load_train_records(path: str | Path) -> list[TrainRecord]:
    path = Path(path)
    records: list[TrainRecord] = []
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc.msg}", line=lineno) from exc
            try:
                records.append(
                    TrainRecord(
                        item_id=str(record["item_id"]),
                        question=record["question"],
                        occurrence_index=int(record["occurrence_index"]),
                    )
                )
            except KeyError as exc:
                raise ParseError(f"missing field {exc.args[0]!r}", line=lineno) from exc
    return records


def save_train_records(records: list[TrainRecord], path: str | Path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(
                json.dumps(
                    {
                        "item_id": rec.item_id,
                        "question": rec.question,
                        "occurrence_index": rec.occurrence_index,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )


def build_injection(
    benchmark: list[DetectionItem],
    base_corpus: list[TrainRecord],
    cfg: InjectionConfig,
) -> tuple[list[TrainRecord], list[DetectionItem]]:
    """Select a seeded subset of the benchmark, duplicate each selected item
    ``occurrences`` times at seeded random positions within the base corpus,
    and label the full benchmark accordingly.

    The selection count is round-half-up of fraction * n. Output is a pure
    function of (inputs, seed).
    """
    if not benchmark:
        raise ValidationError("benchmark must be non-empty")
    n = len(benchmark)
    n_selected = math.floor(cfg.fraction * n + 0.5)
    if n_selected < 1:
        raise ValidationError(
            f"fraction {cfg.fraction} of {n} items rounds to zero selections"
        )

    rng = random.Random(cfg.seed)
    selected_idx = set(rng.sample(range(n), n_selected))

    injected: list[TrainRecord] = []
    for idx in sorted(selected_idx):
        item = benchmark[idx]
        for occ in range(1, cfg.occurrences + 1):
            injected.append(TrainRecord(item.id, item.question, occ))
    rng.shuffle(injected)

    total = len(base_corpus) + len(injected)
    positions = set(rng.sample(range(total), len(injected)))
    train_manifest: list[TrainRecord] = []
    base_iter = iter(base_corpus)
    injected_iter = iter(injected)
    for slot in range(total):
        train_manifest.append(
            next(injected_iter) if slot in positions else next(base_iter)
        )

    # Renumber so occurrence_index counts appearances in file order.
    seen_count: dict[str, int] = {}
    renumbered: list[TrainRecord] = []
    selected_ids = {benchmark[idx].id for idx in selected_idx}
    for rec in train_manifest:
        if rec.item_id in selected_ids:
            seen_count[rec.item_id] = seen_count.get(rec.item_id, 0) + 1
            renumbered.append(
                TrainRecord(rec.item_id, rec.question, seen_count[rec.item_id])
            )
        else:
            renumbered.append(rec)

    detection_manifest = [
        DetectionItem(
            id=item.id,
            question=item.question,
            label=LABEL_MEMBER if i in selected_idx else LABEL_NONMEMBER,
            source=item.source,
            meta=item.meta,
        )
        for i, item in enumerate(benchmark)
    ]
    return renumbered, detection_manifest
