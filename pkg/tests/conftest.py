import json

import pytest

from qfs_forge import AnnotatedTriplet, DocumentSummaryPair


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")
    return str(path)


def read_jsonl(path):
    with open(path, encoding="utf-8") as handle:
        return [json.loads(line) for line in handle if line.strip()]


@pytest.fixture
def small_pairs():
    return [
        DocumentSummaryPair(
            id=f"p{i}",
            document=f"Story {i} begins in town {i}. The mayor number {i} speaks at noon.",
            summary=f"The mayor {i} speaks at noon.\nThe town {i} listens closely.",
            domain="news",
        )
        for i in range(3)
    ]


def make_triplet(
    id="t1",
    document="alpha beta gamma delta",
    summary="Alpha happened.\nBeta follows.",
    queries=("What is alpha?", "What follows beta?"),
    mode="wh",
    query_types=("what", "what"),
):
    return AnnotatedTriplet(
        id=id,
        document=document,
        summary=summary,
        queries=tuple(queries),
        mode=mode,
        query_types=tuple(query_types),
    )
