"""Prompt templates for the plain and self-critique passes.

Slots are literal ``{question}`` / ``{initial_response}`` markers replaced
verbatim (no escaping, no normalization), so questions and responses may
contain any characters including braces and separators.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ValidationError

QUESTION_SLOT = "{question}"
RESPONSE_SLOT = "{initial_response}"

CRITIQUE_INSTRUCTION = (
    "A possible answer is provided below (it may or may not be correct). "
    "Please provide a response that follows a different reasoning path or "
    "provides an alternative solution:\n"
    "\n"
    "---\n"
    "\n"
    f"{RESPONSE_SLOT}\n"
    "\n"
    "---\n"
    "\n"
    "Please now provide your new, different response:"
)

UNCONVENTIONAL_INSTRUCTION = (
    "Answer using a technique you’d typically avoid or a deliberately "
    "unconventional line of reasoning."
)

# Fixed post-cutoff neutral text used as the default non-member prefix for
# the Recall and Entropy-Noise probes; overridable via config.
DEFAULT_NONMEMBER_PREFIX = (
    "In March 2031 the municipal ferry schedule for the town of Brellenkirk "
    "was revised for the third time in a single season. Weekday crossings of "
    "the strait now depart eleven minutes later, a change the harbour office "
    "attributes to updated tide tables and the retirement of the vessel "
    "Aldra Maren after forty-two years of service."
)


@dataclass(frozen=True)
class PromptTemplate:
    system: str | None = None
    user_wrapper: str = QUESTION_SLOT
    critique_wrapper: str = f"{QUESTION_SLOT}\n\n{CRITIQUE_INSTRUCTION}"

    def __post_init__(self):
        if self.user_wrapper.count(QUESTION_SLOT) != 1:
            raise ValidationError("user_wrapper must contain the question slot exactly once")
        if self.critique_wrapper.count(RESPONSE_SLOT) != 1:
            raise ValidationError(
                "critique_wrapper must contain the initial-response slot exactly once"
            )
        if QUESTION_SLOT not in self.critique_wrapper:
            raise ValidationError("critique_wrapper must contain the question slot")


DEFAULT_TEMPLATE = PromptTemplate()


def render_plain(template: PromptTemplate, question: str) -> str:
    """The first-pass prompt: the question embedded in the chat wrapper."""
    if not question:
        raise ValidationError("question must be non-empty")
    return template.user_wrapper.replace(QUESTION_SLOT, question)


def render_critique(template: PromptTemplate, question: str, initial_response: str) -> str:
    """The second-pass prompt: the question plus the critique instruction
    wrapping the initial response verbatim."""
    if not question:
        raise ValidationError("question must be non-empty")
    if not initial_response:
        raise ValidationError("initial_response must be non-empty")
    # Split on the response slot before substituting the question, so a
    # question containing the slot text cannot capture the response.
    before, after = template.critique_wrapper.split(RESPONSE_SLOT)
    before = before.replace(QUESTION_SLOT, question)
    after = after.replace(QUESTION_SLOT, question)
    return before + initial_response + after


def render_unconventional(template: PromptTemplate, question: str) -> str:
    """No-anchor ablation prompt: ask for an unconventional solution without
    embedding any initial response."""
    if not question:
        raise ValidationError("question must be non-empty")
    return render_plain(template, f"{question}\n\n{UNCONVENTIONAL_INSTRUCTION}")
