"""Multi-document query-focused composition.

Rank the cluster's documents by TF-IDF cosine relevance to the query,
summarize each with the backend, then walk the ranking and concatenate
summaries whose token overlap with the selection so far stays under the
threshold, until the token budget is reached.
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .annotate import build_qfs_input
from .backends import SUMMARIZATION_PARAMS, BackendError, CompletionBackend, CompletionParams
from .tokenizer import tokenize


class ComposeError(RuntimeError):
    pass


@dataclass(frozen=True)
class CompositionConfig:
    backend: CompletionBackend
    overlap_threshold: float = 50.0
    token_budget: int = 250
    params: CompletionParams = SUMMARIZATION_PARAMS
    on_overflow: str = "truncate"  # or "drop": skip the overflowing summary
    parallelism: int = 1

    def __post_init__(self):
        if not 0 <= self.overlap_threshold <= 100:
            raise ValueError("overlap_threshold must be in [0, 100]")
        if self.token_budget < 1:
            raise ValueError("token_budget must be >= 1")
        if self.on_overflow not in ("truncate", "drop"):
            raise ValueError("on_overflow must be 'truncate' or 'drop'")
        if self.parallelism < 1:
            raise ValueError("parallelism must be >= 1")


class TfIdfIndex:
    """Term statistics over one document cluster.

    idf(t) = ln(N / df(t)) + 1, computed on the cluster only; the +1 keeps
    cluster-universal terms from vanishing. Terms absent from every
    document carry no weight.
    """

    def __init__(self, docs: list[str]):
        if not docs:
            raise ComposeError("cannot index an empty cluster")
        self.doc_counts = [Counter(tokenize(doc)) for doc in docs]
        self.df = Counter()
        for counts in self.doc_counts:
            self.df.update(counts.keys())
        self.n_docs = len(docs)

    def idf(self, term: str) -> float:
        df = self.df.get(term, 0)
        if df == 0:
            return 0.0
        return math.log(self.n_docs / df) + 1.0

    def vector(self, counts: Counter) -> dict[str, float]:
        return {
            term: tf * self.idf(term)
            for term, tf in counts.items()
            if term in self.df
        }


def _cosine(u: dict[str, float], v: dict[str, float]) -> float:
    if not u or not v:
        return 0.0
    if len(v) < len(u):
        u, v = v, u
    dot = sum(weight * v.get(term, 0.0) for term, weight in u.items())
    if dot == 0.0:
        return 0.0
    norm_u = math.sqrt(sum(w * w for w in u.values()))
    norm_v = math.sqrt(sum(w * w for w in v.values()))
    return dot / (norm_u * norm_v)


def rank_documents(docs: list[str], query: str) -> list[int]:
    """Indices of docs by descending TF-IDF cosine score; ties keep input order."""
    if not docs:
        raise ComposeError("rank_documents: empty document list")
    if not query.strip():
        raise ComposeError("rank_documents: empty query")
    index = TfIdfIndex(docs)
    query_vec = index.vector(Counter(tokenize(query)))
    scores = [_cosine(index.vector(counts), query_vec) for counts in index.doc_counts]
    return sorted(range(len(docs)), key=lambda i: (-scores[i], i))


def overlap_pct(candidate: str, selected: str) -> float:
    """Share of candidate token occurrences whose type appears in selected."""
    tokens = tokenize(candidate)
    if not tokens:
        raise ComposeError("overlap_pct: candidate has no tokens")
    if not selected:
        return 0.0
    selected_types = set(tokenize(selected))
    hits = sum(1 for t in tokens if t in selected_types)
    return 100.0 * hits / len(tokens)


def truncate_to_tokens(text: str, max_tokens: int) -> str:
    """Prefix of ``text`` containing at most max_tokens countable tokens."""
    if max_tokens <= 0:
        return ""
    kept = []
    seen = 0
    for chunk in text.split():
        if tokenize(chunk):
            if seen >= max_tokens:
                break
            seen += 1
        kept.append(chunk)
    return " ".join(kept)


@dataclass(frozen=True)
class ComposeResult:
    summary: str
    selected_doc_indices: tuple[int, ...] = field(default=())
    truncated: bool = False


def compose_cluster(docs: list[str], query: str, cfg: CompositionConfig) -> ComposeResult:
    """Full composition for one cluster, with selection trace."""
    if not docs:
        raise ComposeError("compose: empty document cluster")
    order = rank_documents(docs, query)

    def summarize(doc_index: int) -> str:
        try:
            text = cfg.backend.complete(build_qfs_input(query, docs[doc_index]), cfg.params)
        except BackendError as exc:
            raise ComposeError(f"summarization failed for document {doc_index}: {exc}") from exc
        if not text.strip():
            raise ComposeError(f"summarization returned empty text for document {doc_index}")
        return text.strip()

    if cfg.parallelism > 1 and len(order) > 1:
        with ThreadPoolExecutor(max_workers=cfg.parallelism) as pool:
            summaries = list(pool.map(summarize, order))
    else:
        summaries = [summarize(i) for i in order]

    selected: list[str] = []
    selected_indices: list[int] = []
    used_tokens = 0
    truncated = False
    for doc_index, candidate in zip(order, summaries):
        if overlap_pct(candidate, " ".join(selected)) >= cfg.overlap_threshold:
            continue
        candidate_tokens = len(tokenize(candidate))
        if used_tokens + candidate_tokens > cfg.token_budget:
            if cfg.on_overflow == "drop":
                truncated = True
                break
            remaining = cfg.token_budget - used_tokens
            cut = truncate_to_tokens(candidate, remaining)
            if cut:
                selected.append(cut)
                selected_indices.append(doc_index)
                used_tokens += len(tokenize(cut))
            truncated = True
            break
        selected.append(candidate)
        selected_indices.append(doc_index)
        used_tokens += candidate_tokens
    return ComposeResult(
        summary=" ".join(selected),
        selected_doc_indices=tuple(selected_indices),
        truncated=truncated,
    )


def compose_summary(docs: list[str], query: str, cfg: CompositionConfig) -> str:
    """The composed summary text (see compose_cluster for the trace)."""
    return compose_cluster(docs, query, cfg).summary
