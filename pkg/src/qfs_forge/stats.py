"""Corpus characterization: token lengths, novel-token percentage, correlation.

NTP(a, b) is the share of token occurrences in ``a`` whose type does not
appear in ``b``; it is asymmetric by design and quantifies how much of
``a`` is new relative to ``b``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import AnnotatedTriplet, joined_query_text
from .tokenizer import token_types, tokenize


class StatsError(ValueError):
    pass


def ntp(a: str, b: str, numerator: str = "occurrences") -> float:
    """Percentage of tokens in ``a`` that are absent from ``b``.

    The numerator counts token occurrences by default; pass
    numerator="types" to count distinct token types instead.
    """
    tokens_a = tokenize(a)
    if not tokens_a:
        raise StatsError("ntp: first string has no tokens")
    types_b = token_types(b)
    if numerator == "occurrences":
        novel = sum(1 for t in tokens_a if t not in types_b)
        return 100.0 * novel / len(tokens_a)
    if numerator == "types":
        types_a = set(tokens_a)
        return 100.0 * len(types_a - types_b) / len(types_a)
    raise StatsError(f"unknown ntp numerator mode {numerator!r}")


def pearson(xs, ys) -> float:
    """Sample Pearson correlation coefficient.

    Errors on mismatched lengths, fewer than two points, or two constant
    inputs. With exactly one constant input the coefficient is undefined
    (zero variance); 0.0 is returned as the no-linear-relationship value.
    """
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape:
        raise StatsError(f"pearson: length mismatch ({x.size} vs {y.size})")
    if x.size < 2:
        raise StatsError("pearson: need at least two points")
    dx = x - x.mean()
    dy = y - y.mean()
    sx = float(dx @ dx)
    sy = float(dy @ dy)
    if sx == 0.0 and sy == 0.0:
        raise StatsError("pearson: both inputs are constant")
    if sx == 0.0 or sy == 0.0:
        return 0.0
    return float((dx @ dy) / np.sqrt(sx * sy))


@dataclass(frozen=True)
class CorpusStats:
    """Means over a triplet corpus, in the report's column order."""

    count: int
    mean_len_doc: float
    mean_len_query: float
    mean_len_sum: float
    ntp_sum_doc: float
    ntp_query_doc: float
    ntp_doc_sum: float
    ntp_doc_query: float
    ntp_query_sum: float
    ntp_sum_query: float
    pearson_len_query_vs_sum: float | None

    def to_record(self) -> dict:
        return {
            "count": self.count,
            "len_doc": self.mean_len_doc,
            "len_query": self.mean_len_query,
            "len_sum": self.mean_len_sum,
            "ntp_sum_doc": self.ntp_sum_doc,
            "ntp_query_doc": self.ntp_query_doc,
            "ntp_doc_sum": self.ntp_doc_sum,
            "ntp_doc_query": self.ntp_doc_query,
            "ntp_query_sum": self.ntp_query_sum,
            "ntp_sum_query": self.ntp_sum_query,
            "pearson_len_query_vs_sum": self.pearson_len_query_vs_sum,
        }


def corpus_stats(
    triplets: list[AnnotatedTriplet], ntp_numerator: str = "occurrences"
) -> CorpusStats:
    """Mean lengths, the six NTP columns, and the query/summary length correlation.

    Queries are joined with single spaces before measuring. NTP values are
    computed per triplet, then averaged. The correlation is None when the
    corpus is too small or the lengths are constant.
    """
    if not triplets:
        raise StatsError("corpus_stats: empty triplet list")
    columns = {name: [] for name in (
        "len_doc", "len_query", "len_sum",
        "ntp_sum_doc", "ntp_query_doc", "ntp_doc_sum",
        "ntp_doc_query", "ntp_query_sum", "ntp_sum_query",
    )}
    for triplet in triplets:
        doc = triplet.document
        summary = triplet.summary
        query = joined_query_text(triplet)
        columns["len_doc"].append(len(tokenize(doc)))
        columns["len_query"].append(len(tokenize(query)))
        columns["len_sum"].append(len(tokenize(summary)))
        columns["ntp_sum_doc"].append(ntp(summary, doc, ntp_numerator))
        columns["ntp_query_doc"].append(ntp(query, doc, ntp_numerator))
        columns["ntp_doc_sum"].append(ntp(doc, summary, ntp_numerator))
        columns["ntp_doc_query"].append(ntp(doc, query, ntp_numerator))
        columns["ntp_query_sum"].append(ntp(query, summary, ntp_numerator))
        columns["ntp_sum_query"].append(ntp(summary, query, ntp_numerator))

    # np.mean sums pairwise, keeping the reduction order-stable.
    means = {name: float(np.mean(values)) for name, values in columns.items()}
    try:
        correlation = (
            pearson(columns["len_query"], columns["len_sum"])
            if len(triplets) >= 2
            else None
        )
    except StatsError:
        correlation = None
    return CorpusStats(
        count=len(triplets),
        mean_len_doc=means["len_doc"],
        mean_len_query=means["len_query"],
        mean_len_sum=means["len_sum"],
        ntp_sum_doc=means["ntp_sum_doc"],
        ntp_query_doc=means["ntp_query_doc"],
        ntp_doc_sum=means["ntp_doc_sum"],
        ntp_doc_query=means["ntp_doc_query"],
        ntp_query_sum=means["ntp_query_sum"],
        ntp_sum_query=means["ntp_sum_query"],
        pearson_len_query_vs_sum=correlation,
    )


def format_stats_table(rows: dict[str, CorpusStats]) -> str:
    headers = [
        "row", "count", "len_doc", "len_query", "len_sum",
        "ntp_sum_doc", "ntp_query_doc", "ntp_doc_sum",
        "ntp_doc_query", "ntp_query_sum", "ntp_sum_query", "pearson",
    ]
    lines = ["\t".join(headers)]
    for label, stats in rows.items():
        record = stats.to_record()
        cells = [label, str(record["count"])]
        for key in headers[2:-1]:
            cells.append(f"{record[key]:.2f}")
        corr = record["pearson_len_query_vs_sum"]
        cells.append("-" if corr is None else f"{corr:.4f}")
        lines.append("\t".join(cells))
    return "\n".join(lines)
