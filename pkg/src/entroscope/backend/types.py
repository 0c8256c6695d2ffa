"""Wire-level data model for generation backends."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..errors import ValidationError

GREEDY = "greedy"
TEMPERATURE = "temperature"

_PROB_TOLERANCE = 1e-6


@dataclass(frozen=True)
class DecodingParams:
    mode: str = GREEDY
    temperature: float = 1.0
    top_k_logprobs: int = 20
    max_tokens: int = 4096
    seed: int | None = None

    def __post_init__(self):
        if self.mode not in (GREEDY, TEMPERATURE):
            raise ValidationError(f"unknown decoding mode {self.mode!r}")
        if self.mode == TEMPERATURE and self.temperature <= 0.0:
            raise ValidationError(f"temperature must be > 0, got {self.temperature}")
        if self.top_k_logprobs < 1:
            raise ValidationError(f"top_k_logprobs must be >= 1, got {self.top_k_logprobs}")
        if self.max_tokens < 1:
            raise ValidationError(f"max_tokens must be >= 1, got {self.max_tokens}")

    def to_jsonable(self) -> dict:
        return {
            "mode": self.mode,
            "temperature": self.temperature,
            "top_k_logprobs": self.top_k_logprobs,
            "max_tokens": self.max_tokens,
            "seed": self.seed,
        }

    @classmethod
    def from_jsonable(cls, data: dict) -> "DecodingParams":
        return cls(**data)


@dataclass(frozen=True)
class TokenStep:
    """One decoded token: its natural-log probability and the top-K
    alternatives as (token, probability) pairs sorted by descending mass."""

    token: str
    logprob: float
    topk: tuple[tuple[str, float], ...]

    def validate(self) -> None:
        if self.logprob > _PROB_TOLERANCE:
            raise ValidationError(f"logprob {self.logprob} must be <= 0")
        probs = [p for _, p in self.topk]
        for p in probs:
            if not 0.0 < p <= 1.0 + _PROB_TOLERANCE:
                raise ValidationError(f"top-k probability {p} outside (0, 1]")
        if any(probs[i] < probs[i + 1] for i in range(len(probs) - 1)):
            raise ValidationError("top-k probabilities not sorted descending")
        if math.fsum(probs) > 1.0 + _PROB_TOLERANCE:
            raise ValidationError("top-k probability mass exceeds 1")
        for tok, p in self.topk:
            if tok == self.token and abs(p - math.exp(self.logprob)) > _PROB_TOLERANCE:
                raise ValidationError(
                    f"chosen token prob {p} inconsistent with logprob {self.logprob}"
                )

    def to_jsonable(self) -> dict:
        return {"token": self.token, "logprob": self.logprob, "topk": [list(t) for t in self.topk]}

    @classmethod
    def from_jsonable(cls, data: dict) -> "TokenStep":
        return cls(
            token=data["token"],
            logprob=data["logprob"],
            topk=tuple((t, p) for t, p in data["topk"]),
        )


@dataclass(frozen=True)
class Generation:
    prompt: str
    steps: tuple[TokenStep, ...]
    text: str
    params: DecodingParams
    truncated: bool = False
    meta: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.text != "".join(step.token for step in self.steps):
            raise ValidationError("text does not equal the concatenated step tokens")
        if len(self.steps) > self.params.max_tokens:
            raise ValidationError("generation exceeds max_tokens")
        for step in self.steps:
            step.validate()

    def chosen_logprobs(self) -> list[float]:
        return [step.logprob for step in self.steps]

    def tokens(self) -> list[str]:
        return [step.token for step in self.steps]

    def to_jsonable(self) -> dict:
        return {
            "prompt": self.prompt,
            "steps": [s.to_jsonable() for s in self.steps],
            "text": self.text,
            "params": self.params.to_jsonable(),
            "truncated": self.truncated,
            "meta": self.meta,
        }

    @classmethod
    def from_jsonable(cls, data: dict) -> "Generation":
        return cls(
            prompt=data["prompt"],
            steps=tuple(TokenStep.from_jsonable(s) for s in data["steps"]),
            text=data["text"],
            params=DecodingParams.from_jsonable(data["params"]),
            truncated=data.get("truncated", False),
            meta=data.get("meta", {}),
        )
