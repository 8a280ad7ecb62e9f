"""Corpus records and JSONL serialization.

Input records are document-summary pairs; output records are
document-queries-summary triplets with one query per summary sentence.
Both formats are one JSON object per line.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

DOMAINS = ("news", "dialogue")
MODES = ("wh", "yesno")

# "1. " or "1) " at the start of a line/piece; requires trailing whitespace
# so decimals like "3.5" are untouched.
_NUMBER_PREFIX = re.compile(r"^\s*\d+[.)]\s+")
# Piece that is nothing but a numbering artifact, e.g. "2." split off its line.
_PURE_NUMBER = re.compile(r"^\d+[.)]$")
_SENTENCE_BOUNDARY = re.compile(r"(?<=[.!?])\s+")


class CorpusError(ValueError):
    """Malformed corpus file or record."""


class InvariantError(ValueError):
    """A record violates a structural invariant and was rejected."""


@dataclass(frozen=True)
class DocumentSummaryPair:
    """One generic-summarization record awaiting query annotation."""

    id: str
    document: str
    summary: str
    domain: str

    def __post_init__(self):
        if not self.id:
            raise InvariantError("pair id must be non-empty")
        if not self.document.strip():
            raise InvariantError(f"pair {self.id!r}: document is empty")
        if not self.summary.strip():
            raise InvariantError(f"pair {self.id!r}: summary is empty")
        if self.domain not in DOMAINS:
            raise InvariantError(
                f"pair {self.id!r}: domain must be one of {DOMAINS}, got {self.domain!r}"
            )


@dataclass(frozen=True)
class AnnotatedTriplet:
    """Document, generated queries (one per summary sentence), and summary."""

    id: str
    document: str
    summary: str
    queries: tuple[str, ...]
    mode: str
    query_types: tuple[str, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "queries", tuple(self.queries))
        object.__setattr__(self, "query_types", tuple(self.query_types))

    def validate(self) -> None:
        """Raise InvariantError unless the triplet satisfies its contracts."""
        if not self.document.strip() or not self.summary.strip():
            raise InvariantError(f"triplet {self.id!r}: empty document or summary")
        if self.mode not in MODES:
            raise InvariantError(f"triplet {self.id!r}: bad mode {self.mode!r}")
        n_sentences = len(segment_sentences(self.summary))
        if len(self.queries) != n_sentences:
            raise InvariantError(
                f"triplet {self.id!r}: {len(self.queries)} queries for "
                f"{n_sentences} summary sentences"
            )
        for q in self.queries:
            if not q.strip().endswith("?"):
                raise InvariantError(
                    f"triplet {self.id!r}: query does not end with '?': {q!r}"
                )
        if self.query_types and len(self.query_types) != len(self.queries):
            raise InvariantError(
                f"triplet {self.id!r}: query_types length != queries length"
            )


def segment_sentences(text: str) -> list[str]:
    """Split text into sentences on newlines and terminal punctuation.

    Numbering prefixes ("1. ", "2) ") are stripped, so numbered summaries
    from annotation prompts segment to their content sentences.
    Abbreviations are not treated specially: "U.S. officials" splits after
    "U.S." -- a documented limitation of the deliberately simple rule.
    """
    sentences = []
    for line in text.splitlines():
        line = _NUMBER_PREFIX.sub("", line, count=1)
        for piece in _SENTENCE_BOUNDARY.split(line):
            piece = piece.strip()
            if not piece or _PURE_NUMBER.match(piece):
                continue
            sentences.append(piece)
    return sentences


def normalize_query(query: str) -> str:
    """Trim whitespace and make sure the query ends with a question mark."""
    query = query.strip()
    if query and not query.endswith("?"):
        query += "?"
    return query


def _require_fields(record: dict, fields: tuple[str, ...], line_no: int, path: str):
    for name in fields:
        if name not in record:
            raise CorpusError(f"{path}:{line_no}: missing field {name!r}")
        if not isinstance(record[name], str):
            raise CorpusError(f"{path}:{line_no}: field {name!r} must be a string")


def _iter_json_lines(path: str):
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"{path}:{line_no}: invalid JSON ({exc.msg})") from exc
            if not isinstance(record, dict):
                raise CorpusError(f"{path}:{line_no}: record must be a JSON object")
            yield line_no, record


def load_corpus(path: str, format: str = "jsonl") -> list[DocumentSummaryPair]:
    """Load document-summary pairs, preserving file order.

    Raises CorpusError with the offending line number on malformed records
    and on duplicate ids.
    """
    if format != "jsonl":
        raise CorpusError(f"unsupported corpus format {format!r}")
    pairs = []
    seen: set[str] = set()
    for line_no, record in _iter_json_lines(path):
        _require_fields(record, ("id", "document", "summary", "domain"), line_no, path)
        if record["id"] in seen:
            raise CorpusError(f"{path}:{line_no}: duplicate id {record['id']!r}")
        seen.add(record["id"])
        try:
            pairs.append(
                DocumentSummaryPair(
                    id=record["id"],
                    document=record["document"],
                    summary=record["summary"],
                    domain=record["domain"],
                )
            )
        except InvariantError as exc:
            raise CorpusError(f"{path}:{line_no}: {exc}") from exc
    return pairs


def triplet_to_record(triplet: AnnotatedTriplet) -> dict:
    return {
        "id": triplet.id,
        "document": triplet.document,
        "summary": triplet.summary,
        "queries": list(triplet.queries),
        "mode": triplet.mode,
        "query_types": list(triplet.query_types),
    }


def write_triplets(triplets: list[AnnotatedTriplet], path: str) -> None:
    """Write one JSON record per triplet; every triplet is validated first."""
    for triplet in triplets:
        triplet.validate()
    try:
        with open(path, "w", encoding="utf-8") as handle:
            for triplet in triplets:
                handle.write(json.dumps(triplet_to_record(triplet), ensure_ascii=False))
                handle.write("\n")
    except OSError as exc:
        raise CorpusError(f"cannot write triplets to {path}: {exc}") from exc


def load_triplets(path: str) -> list[AnnotatedTriplet]:
    """Inverse of write_triplets; round-trips value-identically."""
    triplets = []
    seen: set[str] = set()
    for line_no, record in _iter_json_lines(path):
        _require_fields(record, ("id", "document", "summary", "mode"), line_no, path)
        queries = record.get("queries")
        if not isinstance(queries, list) or not all(isinstance(q, str) for q in queries):
            raise CorpusError(f"{path}:{line_no}: 'queries' must be a list of strings")
        if record["id"] in seen:
            raise CorpusError(f"{path}:{line_no}: duplicate id {record['id']!r}")
        seen.add(record["id"])
        triplets.append(
            AnnotatedTriplet(
                id=record["id"],
                document=record["document"],
                summary=record["summary"],
                queries=tuple(record["queries"]),
                mode=record["mode"],
                query_types=tuple(record.get("query_types", ())),
            )
        )
    return triplets


def joined_query_text(triplet: AnnotatedTriplet) -> str:
    """Queries joined with single spaces, the unit measured by corpus stats."""
    return " ".join(triplet.queries)
