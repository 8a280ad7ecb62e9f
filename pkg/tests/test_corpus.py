import json
import re

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qfs_forge.corpus import (
    CorpusError,
    DocumentSummaryPair,
    InvariantError,
    load_corpus,
    load_triplets,
    normalize_query,
    segment_sentences,
    write_triplets,
)
from conftest import make_triplet, write_jsonl


class TestSegmentSentences:
    def test_empty_input(self):
        assert segment_sentences("") == []

    def test_two_terminal_punct_sentences(self):
        assert segment_sentences("He ran. She laughed.") == ["He ran.", "She laughed."]

    def test_numbered_lines_strip_prefixes(self):
        text = "1. Who was Tomas Medina Caracas?\n2. What was he indicted for?"
        assert segment_sentences(text) == [
            "Who was Tomas Medina Caracas?",
            "What was he indicted for?",
        ]

    def test_newlines_are_boundaries_without_punctuation(self):
        assert segment_sentences("first line\nsecond line") == ["first line", "second line"]

    def test_inline_numbering_artifacts_drop(self):
        assert segment_sentences("1. One thing? 2. Another thing?") == [
            "One thing?",
            "Another thing?",
        ]

    def test_abbreviations_not_special(self):
        # documented limitation of the simple rule
        assert segment_sentences("U.S. officials spoke.") == ["U.S.", "officials spoke."]

    def test_decimal_numbers_not_stripped(self):
        assert segment_sentences("3.5 billion was spent") == ["3.5 billion was spent"]

    def test_exclamation_and_question_boundaries(self):
        assert segment_sentences("Wow! Really? Yes.") == ["Wow!", "Really?", "Yes."]

    @given(st.text(max_size=120))
    def test_deterministic_and_idempotent_on_joined_output(self, text):
        first = segment_sentences(text)
        assert segment_sentences(text) == first
        assert segment_sentences("\n".join(first)) == first

    @given(
        st.lists(
            st.text(
                alphabet=st.characters(whitelist_categories=("Ll", "Lu")),
                min_size=1,
                max_size=8,
            ).map(lambda w: w + "."),
            min_size=1,
            max_size=5,
        )
    )
    def test_concatenation_preserves_unnumbered_text(self, words):
        text = " ".join(words)
        rebuilt = "".join(segment_sentences(text))
        assert re.sub(r"\s+", "", rebuilt) == re.sub(r"\s+", "", text)


class TestPairInvariants:
    def test_rejects_empty_document(self):
        with pytest.raises(InvariantError):
            DocumentSummaryPair(id="a", document="  ", summary="s.", domain="news")

    def test_rejects_unknown_domain(self):
        with pytest.raises(InvariantError):
            DocumentSummaryPair(id="a", document="d.", summary="s.", domain="email")


class TestLoadCorpus:
    def test_loads_in_file_order(self, tmp_path):
        path = write_jsonl(
            tmp_path / "pairs.jsonl",
            [
                {"id": "a", "document": "d1.", "summary": "s1.", "domain": "news"},
                {"id": "b", "document": "d2.", "summary": "s2.", "domain": "dialogue"},
                {"id": "c", "document": "d3.", "summary": "s3.", "domain": "news"},
            ],
        )
        pairs = load_corpus(path)
        assert [p.id for p in pairs] == ["a", "b", "c"]

    def test_missing_field_reports_line_number(self, tmp_path):
        path = write_jsonl(
            tmp_path / "pairs.jsonl",
            [
                {"id": "a", "document": "d.", "summary": "s.", "domain": "news"},
                {"id": "b", "document": "d.", "domain": "news"},
            ],
        )
        with pytest.raises(CorpusError, match=r":2: missing field 'summary'"):
            load_corpus(path)

    def test_duplicate_id_rejected(self, tmp_path):
        path = write_jsonl(
            tmp_path / "pairs.jsonl",
            [
                {"id": "a", "document": "d.", "summary": "s.", "domain": "news"},
                {"id": "a", "document": "d2.", "summary": "s2.", "domain": "news"},
            ],
        )
        with pytest.raises(CorpusError, match="duplicate id 'a'"):
            load_corpus(path)

    def test_invalid_json_reports_line(self, tmp_path):
        path = tmp_path / "pairs.jsonl"
        path.write_text('{"id": "a", "document": "d.", "summary": "s.", "domain": "news"}\n{broken\n')
        with pytest.raises(CorpusError, match=":2:"):
            load_corpus(str(path))


class TestTripletRoundTrip:
    def test_write_then_load_is_identity(self, tmp_path):
        triplets = [
            make_triplet(id=f"t{i}", queries=(f"What is alpha {i}?", "What follows beta?"))
            for i in range(5)
        ]
        path = tmp_path / "triplets.jsonl"
        write_triplets(triplets, str(path))
        assert load_triplets(str(path)) == triplets

    def test_empty_list_gives_empty_file(self, tmp_path):
        path = tmp_path / "triplets.jsonl"
        write_triplets([], str(path))
        assert path.read_text() == ""
        assert load_triplets(str(path)) == []

    def test_query_count_invariant_gates_write(self, tmp_path):
        bad = make_triplet(queries=("Only one?",))
        with pytest.raises(InvariantError, match="1 queries for 2"):
            write_triplets([bad], str(tmp_path / "x.jsonl"))

    def test_question_mark_invariant_gates_write(self, tmp_path):
        bad = make_triplet(queries=("What is alpha?", "no question mark"))
        with pytest.raises(InvariantError, match="does not end with"):
            write_triplets([bad], str(tmp_path / "x.jsonl"))

    def test_round_trip_is_byte_exact(self, tmp_path):
        triplets = [make_triplet(id="t1", document="café menu changed")]
        path_a = tmp_path / "a.jsonl"
        path_b = tmp_path / "b.jsonl"
        write_triplets(triplets, str(path_a))
        write_triplets(load_triplets(str(path_a)), str(path_b))
        assert path_a.read_bytes() == path_b.read_bytes()

    def test_record_field_order(self, tmp_path):
        path = tmp_path / "t.jsonl"
        write_triplets([make_triplet()], str(path))
        record = json.loads(path.read_text())
        assert list(record) == ["id", "document", "summary", "queries", "mode", "query_types"]


def test_normalize_query():
    assert normalize_query("  What is it  ") == "What is it?"
    assert normalize_query("Already there?") == "Already there?"
    assert normalize_query("") == ""
