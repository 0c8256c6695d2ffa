"""Backend contract: text generation with per-token top-K probabilities."""

from __future__ import annotations

from typing import Protocol, runtime_checkable

from .types import DecodingParams, Generation


@runtime_checkable
class Backend(Protocol):
    """Any source of generations exposing per-token top-K probabilities.

    Implementations must tolerate concurrent in-flight calls; each call is
    independent of every other.
    """

    def generate(self, prompt: str, params: DecodingParams) -> Generation:
        """Generate a response. Greedy mode must be deterministic for
        in-process backends; networked backends request determinism via
        temperature 0 and seed but cannot guarantee it."""
        ...

    def score_response(self, prompt: str, response_tokens: list[str]) -> list[float]:
        """Teacher-forced per-token natural-log probabilities of a fixed
        response under the prompt. Raises CapabilityError when the backend
        cannot score externally supplied tokens."""
        ...
