"""Annotation prompt construction.

A prompt is: task instruction, a one-shot worked example (document,
numbered summary, numbered queries), then the target document and its
numbered summary, ending with the query-section label so the completion
backend fills in the numbered queries.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from importlib import resources

from .corpus import DOMAINS, MODES, DocumentSummaryPair, segment_sentences

WH_INSTRUCTION = (
    "For each summary, write a general question about the article that can be "
    "answered by it"
)
YESNO_INSTRUCTION = (
    "For each summary, write a binary question about the article that can be "
    "answered by it"
)

# Section labels are this artifact's convention; override via PromptLabels
# or the run config if a backend was tuned on different ones.
DEFAULT_SUMMARY_LABEL = "Summary:"
DEFAULT_QUERY_LABEL = "Questions:"
DOCUMENT_LABELS = {"news": "Article:", "dialogue": "Dialogue:"}


class PromptError(ValueError):
    """Prompt construction failed (bad spec or mismatched inputs)."""


@dataclass(frozen=True)
class PromptLabels:
    document: str = ""
    summary: str = DEFAULT_SUMMARY_LABEL
    query: str = DEFAULT_QUERY_LABEL

    def for_domain(self, domain: str) -> "PromptLabels":
        if self.document:
            return self
        return replace(self, document=DOCUMENT_LABELS[domain])


@dataclass(frozen=True)
class OneShotExample:
    """A worked example: document plus aligned summary and query sentences."""

    document: str
    summary_sentences: tuple[str, ...]
    query_sentences: tuple[str, ...]
    domain: str
    mode: str

    def __post_init__(self):
        object.__setattr__(self, "summary_sentences", tuple(self.summary_sentences))
        object.__setattr__(self, "query_sentences", tuple(self.query_sentences))
        if self.domain not in DOMAINS:
            raise PromptError(f"unknown example domain {self.domain!r}")
        if self.mode not in MODES:
            raise PromptError(f"unknown example mode {self.mode!r}")
        if len(self.summary_sentences) != len(self.query_sentences):
            raise PromptError(
                "one-shot example needs exactly one query per summary sentence "
                f"({len(self.summary_sentences)} summaries, "
                f"{len(self.query_sentences)} queries)"
            )


@dataclass(frozen=True)
class PromptSpec:
    """Everything needed to render an annotation prompt deterministically."""

    instruction: str
    example: OneShotExample
    labels: PromptLabels = PromptLabels()

    def __post_init__(self):
        # custom instructions are allowed, but the two built-ins must not
        # be crossed with the other mode's example
        builtin = {WH_INSTRUCTION: "wh", YESNO_INSTRUCTION: "yesno"}.get(self.instruction)
        if builtin is not None and builtin != self.example.mode:
            raise PromptError(
                f"{builtin} instruction paired with a {self.example.mode} example"
            )

    @property
    def mode(self) -> str:
        return self.example.mode

    @property
    def domain(self) -> str:
        return self.example.domain


def instruction_for_mode(mode: str) -> str:
    if mode == "wh":
        return WH_INSTRUCTION
    if mode == "yesno":
        return YESNO_INSTRUCTION
    raise PromptError(f"unknown mode {mode!r}")


def _load_builtin(domain: str) -> dict:
    if domain not in DOMAINS:
        raise PromptError(f"unknown domain {domain!r}")
    text = resources.files("qfs_forge.data").joinpath(f"oneshot_{domain}.json").read_text(
        encoding="utf-8"
    )
    return json.loads(text)


def load_example(path: str, mode: str) -> OneShotExample:
    """Load a one-shot example from a JSON file (same schema as the built-ins)."""
    with open(path, encoding="utf-8") as handle:
        raw = json.load(handle)
    return _example_from_raw(raw, mode)


def builtin_example(domain: str, mode: str) -> OneShotExample:
    """The shipped worked example for the domain, with wh or yes/no queries."""
    return _example_from_raw(_load_builtin(domain), mode)


def _example_from_raw(raw: dict, mode: str) -> OneShotExample:
    if mode not in MODES:
        raise PromptError(f"unknown mode {mode!r}")
    try:
        return OneShotExample(
            document=raw["document"],
            summary_sentences=tuple(raw["summary_sentences"]),
            query_sentences=tuple(raw["queries"][mode]),
            domain=raw["domain"],
            mode=mode,
        )
    except KeyError as exc:
        raise PromptError(f"one-shot example file missing key {exc}") from exc


def default_spec(
    domain: str,
    mode: str,
    instruction: str | None = None,
    labels: PromptLabels | None = None,
    example: OneShotExample | None = None,
) -> PromptSpec:
    return PromptSpec(
        instruction=instruction or instruction_for_mode(mode),
        example=example or builtin_example(domain, mode),
        labels=labels or PromptLabels(),
    )


def number_sentences(sentences) -> str:
    """Render sentences as "1. ...\\n2. ..." with 1-based indices."""
    sentences = list(sentences)
    if not sentences:
        raise PromptError("cannot number an empty sentence list")
    return "\n".join(f"{i}. {s}" for i, s in enumerate(sentences, start=1))


def build_annotation_prompt(pair: DocumentSummaryPair, spec: PromptSpec) -> str:
    """Render the full annotation prompt for one document-summary pair.

    Pure function of its inputs: identical inputs give byte-identical
    prompts, which is what keeps golden-file tests and mock-backend runs
    stable.
    """
    if pair.domain != spec.example.domain:
        raise PromptError(
            f"pair {pair.id!r} is {pair.domain!r} but the one-shot example is "
            f"{spec.example.domain!r}; pick the example matching the domain"
        )
    labels = spec.labels.for_domain(pair.domain)
    target_sentences = segment_sentences(pair.summary)
    if not target_sentences:
        raise PromptError(f"pair {pair.id!r}: summary has no sentences")
    blocks = [
        spec.instruction,
        f"{labels.document}\n{spec.example.document}",
        f"{labels.summary}\n{number_sentences(spec.example.summary_sentences)}",
        f"{labels.query}\n{number_sentences(spec.example.query_sentences)}",
        f"{labels.document}\n{pair.document}",
        f"{labels.summary}\n{number_sentences(target_sentences)}",
        f"{labels.query}\n",
    ]
    return "\n\n".join(blocks)
