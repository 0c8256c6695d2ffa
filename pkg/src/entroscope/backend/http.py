"""Networked backend targeting a logprob-capable chat-completion HTTP API.

The request asks for per-token logprobs with ``top_logprobs`` alternatives;
greedy decoding is encoded as temperature 0 on the wire. Transport failures
and 5xx responses are retried up to 3 times with exponential backoff; 4xx
responses are not retried.
"""

from __future__ import annotations

import math
import os
import time

import httpx

from ..errors import CapabilityError, GenerationError, TransportError, ValidationError
from .types import GREEDY, DecodingParams, Generation, TokenStep

DEFAULT_API_KEY_ENV = "ENTROSCOPE_API_KEY"
MAX_RETRIES = 3
BACKOFF_SECONDS = 0.5


class HttpBackend:
    """Chat-completion client reporting per-token top-K probabilities.

    ``score_response`` is emulated through a legacy completions endpoint
    with echo scoring when ``completions_url`` is configured; otherwise it
    raises CapabilityError.
    """

    def __init__(
        self,
        endpoint: str,
        model: str,
        api_key_env: str = DEFAULT_API_KEY_ENV,
        completions_url: str | None = None,
        timeout: float = 120.0,
        transport: httpx.BaseTransport | None = None,
        sleep=time.sleep,
    ):
        if not endpoint:
            raise ValidationError("endpoint must be non-empty")
        self.endpoint = endpoint.rstrip("/")
        self.model = model
        self.api_key_env = api_key_env
        self.completions_url = completions_url
        self._sleep = sleep
        self._client = httpx.Client(timeout=timeout, transport=transport)

    def __repr__(self) -> str:  # never include the credential
        return f"HttpBackend(endpoint={self.endpoint!r}, model={self.model!r})"

    def close(self) -> None:
        self._client.close()

    def _headers(self) -> dict[str, str]:
        headers = {"Content-Type": "application/json"}
        key = os.environ.get(self.api_key_env)
        if key:
            headers["Authorization"] = f"Bearer {key}"
        return headers

    def _post(self, url: str, body: dict) -> dict:
        last_error: Exception | None = None
        for attempt in range(MAX_RETRIES + 1):
            try:
                response = self._client.post(url, json=body, headers=self._headers())
            except httpx.HTTPError as exc:
                last_error = exc
                if attempt < MAX_RETRIES:
                    self._sleep(BACKOFF_SECONDS * (2**attempt))
                continue
            if response.status_code >= 500:
                last_error = TransportError(
                    f"server error {response.status_code}", status=response.status_code
                )
                if attempt < MAX_RETRIES:
                    self._sleep(BACKOFF_SECONDS * (2**attempt))
                continue
            if response.status_code >= 400:
                raise TransportError(
                    f"request rejected with status {response.status_code}: "
                    f"{response.text[:500]}",
                    retryable=False,
                    status=response.status_code,
                )
            return response.json()
        raise TransportError(f"transport failed after {MAX_RETRIES} retries: {last_error}")

    def generate(self, prompt: str, params: DecodingParams) -> Generation:
        if not prompt:
            raise ValidationError("prompt must be non-empty")
        body = {
            "model": self.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": 0.0 if params.mode == GREEDY else params.temperature,
            "max_tokens": params.max_tokens,
            "logprobs": True,
            "top_logprobs": params.top_k_logprobs,
        }
        if params.seed is not None:
            body["seed"] = params.seed
        data = self._post(f"{self.endpoint}/chat/completions", body)
        try:
            choice = data["choices"][0]
        except (KeyError, IndexError) as exc:
            raise GenerationError(f"malformed response: {data}") from exc
        logprob_content = (choice.get("logprobs") or {}).get("content")
        if not logprob_content:
            raise CapabilityError("backend did not return per-token logprobs")
        steps = []
        for entry in logprob_content:
            alts = entry.get("top_logprobs") or []
            topk = tuple(
                sorted(
                    ((alt["token"], math.exp(alt["logprob"])) for alt in alts),
                    key=lambda t: -t[1],
                )
            )
            steps.append(
                TokenStep(token=entry["token"], logprob=entry["logprob"], topk=topk)
            )
        if not steps:
            raise GenerationError("backend returned an empty generation")
        return Generation(
            prompt=prompt,
            steps=tuple(steps),
            text="".join(s.token for s in steps),
            params=params,
            truncated=choice.get("finish_reason") == "length",
            meta={"model": self.model, "deterministic": False},
        )

    def score_response(self, prompt: str, response_tokens: list[str]) -> list[float]:
        if not response_tokens:
            raise ValidationError("response_tokens must be non-empty")
        if not self.completions_url:
            raise CapabilityError(
                "teacher-forced scoring needs a completions endpoint with echo "
                "support; set completions_url to enable it"
            )
        body = {
            "model": self.model,
            "prompt": prompt + "".join(response_tokens),
            "max_tokens": 0,
            "echo": True,
            "logprobs": 1,
        }
        data = self._post(self.completions_url, body)
        try:
            logprobs = data["choices"][0]["logprobs"]
            tokens = logprobs["tokens"]
            token_logprobs = logprobs["token_logprobs"]
        except (KeyError, IndexError) as exc:
            raise CapabilityError(f"echo scoring not supported by backend: {data}") from exc
        tail_tokens = tokens[-len(response_tokens):]
        if tail_tokens != list(response_tokens):
            raise CapabilityError(
                "backend tokenization of the response does not match the "
                "provided tokens; echo scoring unavailable"
            )
        return [float(lp) for lp in token_logprobs[-len(response_tokens):]]
