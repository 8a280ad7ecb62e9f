import math
from collections import Counter

import pytest

from qfs_forge.backends import BackendError, SUMMARIZATION_PARAMS
from qfs_forge.compose import (
    ComposeError,
    CompositionConfig,
    TfIdfIndex,
    compose_cluster,
    compose_summary,
    overlap_pct,
    rank_documents,
    truncate_to_tokens,
)
from qfs_forge.tokenizer import tokenize


class MapBackend:
    """Summarizer double: doc text -> canned summary, keyed by substring."""

    name = "map-mock"

    def __init__(self, mapping):
        self.mapping = mapping

    def complete(self, prompt, params):
        document = prompt.split(" \n context:\n", 1)[1]
        for key, summary in self.mapping.items():
            if key in document:
                return summary
        raise BackendError(f"no canned summary for {document[:40]!r}")


def config(mapping, **kwargs):
    return CompositionConfig(backend=MapBackend(mapping), **kwargs)


def brute_force_rank(docs, query):
    """Independent tf-idf cosine ranking used as the oracle."""
    n = len(docs)
    doc_tokens = [tokenize(d) for d in docs]
    vocab = set().union(*doc_tokens) if docs else set()
    df = {t: sum(1 for toks in doc_tokens if t in toks) for t in vocab}
    idf = {t: math.log(n / df[t]) + 1.0 for t in vocab}

    def vec(tokens):
        counts = Counter(t for t in tokens if t in vocab)
        return {t: c * idf[t] for t, c in counts.items()}

    qv = vec(tokenize(query))

    def cosine(u, v):
        dot = sum(w * v.get(t, 0.0) for t, w in u.items())
        if dot == 0.0:
            return 0.0
        nu = math.sqrt(sum(w * w for w in u.values()))
        nv = math.sqrt(sum(w * w for w in v.values()))
        return dot / (nu * nv)

    scores = [cosine(vec(toks), qv) for toks in doc_tokens]
    return sorted(range(n), key=lambda i: (-scores[i], i))


class TestRankDocuments:
    def test_single_document(self):
        assert rank_documents(["only doc"], "any query") == [0]

    def test_zero_overlap_keeps_original_order(self):
        docs = ["alpha beta", "gamma delta", "epsilon zeta"]
        assert rank_documents(docs, "unrelated words") == [0, 1, 2]

    def test_hand_built_cluster_matches_brute_force(self):
        docs = [
            "snow fell on the town",
            "the market opened higher today",
            "snow and cold hit the market",
        ]
        query = "snow market"
        assert rank_documents(docs, query) == brute_force_rank(docs, query)

    def test_identical_docs_tie_break_stable(self):
        docs = ["same words here"] * 4
        assert rank_documents(docs, "same words") == [0, 1, 2, 3]

    def test_permutation_consistency(self):
        docs = [
            "apples and pears grow here",
            "bridges span the wide river",
            "apples fall near the river",
        ]
        query = "apples river"
        base = rank_documents(docs, query)
        permuted = [docs[2], docs[0], docs[1]]
        mapping = {0: 2, 1: 0, 2: 1}  # new index -> old index
        remapped = [mapping[i] for i in rank_documents(permuted, query)]
        assert remapped == base

    def test_random_tiny_clusters_match_oracle(self):
        import random

        rng = random.Random(1234)
        vocab = [f"w{i}" for i in range(12)]
        for _ in range(50):
            docs = [
                " ".join(rng.choices(vocab, k=rng.randint(1, 10)))
                for _ in range(rng.randint(1, 5))
            ]
            query = " ".join(rng.choices(vocab, k=rng.randint(1, 4)))
            assert rank_documents(docs, query) == brute_force_rank(docs, query)

    def test_empty_inputs_error(self):
        with pytest.raises(ComposeError):
            rank_documents([], "q")
        with pytest.raises(ComposeError):
            rank_documents(["d"], "  ")

    def test_index_df_at_least_one(self):
        index = TfIdfIndex(["a b", "b c"])
        assert all(df >= 1 for df in index.df.values())
        assert index.idf("zzz") == 0.0


class TestOverlapPct:
    def test_self_overlap_is_hundred(self):
        assert overlap_pct("the red fox", "the red fox") == 100.0

    def test_empty_selection_is_zero(self):
        assert overlap_pct("a b", "") == 0.0

    def test_hand_counted_example(self):
        # complement of the novelty count: only "red" is novel
        assert overlap_pct("the red fox", "the fox ran") == pytest.approx(200.0 / 3.0, abs=1e-9)

    def test_empty_candidate_errors(self):
        with pytest.raises(ComposeError):
            overlap_pct("  ", "something")


class TestTruncateToTokens:
    def test_whole_token_boundary(self):
        assert truncate_to_tokens("one two three four", 2) == "one two"

    def test_zero_budget_empty(self):
        assert truncate_to_tokens("one two", 0) == ""

    def test_budget_beyond_length_keeps_text(self):
        assert truncate_to_tokens("one two", 10) == "one two"


class TestComposeSummary:
    def test_single_doc_passthrough(self):
        cfg = config({"doc one": "S."})
        assert compose_summary(["doc one"], "query words", cfg) == "S."

    def test_identical_summaries_deduplicated(self):
        cfg = config({"doc one": "same summary text", "doc two": "same summary text"})
        result = compose_cluster(["doc one", "doc two"], "query", cfg)
        assert result.summary == "same summary text"
        assert result.selected_doc_indices == (0,)
        assert result.truncated is False

    def test_low_overlap_summaries_concatenate(self):
        cfg = config({"doc one": "alpha beta gamma", "doc two": "delta epsilon zeta"})
        result = compose_cluster(["doc one", "doc two"], "query", cfg)
        assert result.summary == "alpha beta gamma delta epsilon zeta"
        assert result.selected_doc_indices == (0, 1)

    def test_budget_truncates_third_summary(self):
        summaries = {
            "doc one": " ".join(f"a{i}" for i in range(120)),
            "doc two": " ".join(f"b{i}" for i in range(120)),
            "doc three": " ".join(f"c{i}" for i in range(120)),
        }
        cfg = config(summaries, token_budget=250)
        result = compose_cluster(["doc one", "doc two", "doc three"], "query", cfg)
        tokens = tokenize(result.summary)
        assert len(tokens) == 250
        assert result.truncated is True
        assert result.selected_doc_indices == (0, 1, 2)
        # hand simulation: 120 + 120 + first 10 tokens of the third summary
        assert tokens[240:] == [f"c{i}" for i in range(10)]

    def test_drop_mode_skips_overflowing_summary(self):
        summaries = {
            "doc one": " ".join(f"a{i}" for i in range(120)),
            "doc two": " ".join(f"b{i}" for i in range(200)),
        }
        cfg = config(summaries, token_budget=150, on_overflow="drop")
        result = compose_cluster(["doc one", "doc two"], "query", cfg)
        assert len(tokenize(result.summary)) == 120
        assert result.selected_doc_indices == (0,)
        assert result.truncated is True

    def test_backend_failure_names_document_index(self):
        cfg = config({"doc one": "fine summary"})
        with pytest.raises(ComposeError, match="document 1"):
            compose_summary(["doc one", "unknown doc"], "query", cfg)

    def test_deterministic(self):
        mapping = {"doc one": "alpha beta", "doc two": "gamma delta"}
        first = compose_summary(["doc one", "doc two"], "query", config(mapping))
        second = compose_summary(["doc one", "doc two"], "query", config(mapping))
        assert first == second

    def test_empty_cluster_errors(self):
        with pytest.raises(ComposeError):
            compose_summary([], "q", config({}))

    def test_parallel_summarization_matches_serial(self):
        mapping = {f"doc {i}": f"summary {i} stands alone{i}" for i in range(6)}
        docs = list(mapping)
        serial = compose_cluster(docs, "summary", config(mapping, parallelism=1))
        parallel = compose_cluster(docs, "summary", config(mapping, parallelism=4))
        assert serial == parallel


class TestConfigValidation:
    def test_threshold_range(self):
        with pytest.raises(ValueError):
            CompositionConfig(backend=MapBackend({}), overlap_threshold=101)

    def test_budget_positive(self):
        with pytest.raises(ValueError):
            CompositionConfig(backend=MapBackend({}), token_budget=0)

    def test_default_params_are_summarization_preset(self):
        cfg = CompositionConfig(backend=MapBackend({}))
        assert cfg.params == SUMMARIZATION_PARAMS
        assert cfg.params.temperature == 1.0
        assert cfg.params.top_p == 0.9
        assert cfg.params.max_tokens == 512
