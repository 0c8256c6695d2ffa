"""Token-level entropy sequences and the length-penalized cosine similarity.

All entropies are in nats. The top-K variant truncates the distribution to
its K largest masses without renormalizing, so it is a lower bound of the
exact entropy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DomainError

# Values below this are treated as exactly zero to avoid -0.0 artifacts.
_ENTROPY_CLAMP = 1e-12

_MASS_TOLERANCE = 1e-6


@dataclass(frozen=True)
class EntropySeq:
    """Per-step entropy values of one generation."""

    values: tuple[float, ...]

    @property
    def source_len(self) -> int:
        return len(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def to_jsonable(self) -> list[float]:
        """Audit form: values rounded to 9 decimals."""
        return [round(v, 9) for v in self.values]


def token_entropy(dist: Iterable[float]) -> float:
    """Shannon entropy -sum(p * ln p) over the provided masses.

    Zero-probability entries contribute nothing. The masses need not sum
    to 1 (a truncated distribution is fine) but must not exceed 1.
    """
    probs = list(dist)
    total = math.fsum(probs)
    if total > 1.0 + _MASS_TOLERANCE:
        raise DomainError(f"probability mass {total} exceeds 1")
    terms = []
    for p in probs:
        if p < 0.0 or p > 1.0:
            raise DomainError(f"probability {p} outside [0, 1]")
        if p > 0.0:
            terms.append(-p * math.log(p))
    h = math.fsum(terms)
    return 0.0 if h < _ENTROPY_CLAMP else h


def topk_entropy(topk: Sequence[float], k: int, renormalize: bool = False) -> float:
    """Entropy over the first min(k, len) masses of a descending-sorted list.

    By default the truncated tail is treated as contributing zero; with
    ``renormalize`` the kept masses are rescaled to sum to 1 first.
    """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if len(topk) == 0:
        raise DomainError("empty top-k distribution")
    kept = list(topk[: min(k, len(topk))])
    if renormalize:
        total = math.fsum(kept)
        if total <= 0.0:
            raise DomainError("cannot renormalize zero mass")
        kept = [p / total for p in kept]
    return token_entropy(kept)


def entropy_sequence(generation, k: int, renormalize: bool = False) -> EntropySeq:
    """Entropy at each step of a Generation, from its recorded top-K masses."""
    if not generation.steps:
        raise DomainError("generation has no steps")
    values = tuple(
        topk_entropy([p for _, p in step.topk], k, renormalize=renormalize)
        for step in generation.steps
    )
    return EntropySeq(values)


def penalized_cosine(a: EntropySeq | Sequence[float], b: EntropySeq | Sequence[float]) -> float:
    """Cosine similarity of zero-padded sequences times the min/max length ratio.

    Entropy values are non-negative, so the result lies in [0, 1]. A
    zero-norm vector (fully collapsed policy) gives cosine 0 unless both
    vectors are all-zero, in which case the cosine is taken as 1 and the
    score is the length ratio alone.
    """
    va = list(a.values if isinstance(a, EntropySeq) else a)
    vb = list(b.values if isinstance(b, EntropySeq) else b)
    if not va or not vb:
        raise DomainError("cannot compare empty entropy sequences")
    ratio = min(len(va), len(vb)) / max(len(va), len(vb))
    # Zero padding means only the overlapping prefix contributes to the dot.
    overlap = min(len(va), len(vb))
    dot = math.fsum(va[i] * vb[i] for i in range(overlap))
    norm_a = math.sqrt(math.fsum(x * x for x in va))
    norm_b = math.sqrt(math.fsum(x * x for x in vb))
    if norm_a == 0.0 and norm_b == 0.0:
        cos = 1.0
    elif norm_a == 0.0 or norm_b == 0.0:
        cos = 0.0
    else:
        cos = dot / (norm_a * norm_b)
        cos = min(1.0, max(0.0, cos))
    return cos * ratio
