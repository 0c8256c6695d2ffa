from .base import Backend
from .cache import CachingBackend, generation_key, score_key
from .http import DEFAULT_API_KEY_ENV, HttpBackend
from .prompts import (
    CRITIQUE_INSTRUCTION,
    DEFAULT_NONMEMBER_PREFIX,
    DEFAULT_TEMPLATE,
    UNCONVENTIONAL_INSTRUCTION,
    PromptTemplate,
    render_critique,
    render_plain,
    render_unconventional,
)
from .types import GREEDY, TEMPERATURE, DecodingParams, Generation, TokenStep

__all__ = [
    "Backend",
    "CachingBackend",
    "generation_key",
    "score_key",
    "HttpBackend",
    "DEFAULT_API_KEY_ENV",
    "PromptTemplate",
    "DEFAULT_TEMPLATE",
    "CRITIQUE_INSTRUCTION",
    "UNCONVENTIONAL_INSTRUCTION",
    "DEFAULT_NONMEMBER_PREFIX",
    "render_plain",
    "render_critique",
    "render_unconventional",
    "DecodingParams",
    "Generation",
    "TokenStep",
    "GREEDY",
    "TEMPERATURE",
]
