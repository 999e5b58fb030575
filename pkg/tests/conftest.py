import pytest

from pubsum.corpus import Paper, paper_from_record
from pubsum.fixtures import generate_corpus


def make_paper(
    paper_id: str = "p1",
    title: str = "graph routing with kernel pruning",
    abstract=("we present graph routing with kernel pruning.",),
    highlights=("graph routing improves kernel pruning throughput.",),
    keywords=("graph routing",),
    sections=None,
) -> Paper:
    """Hand-built paper for targeted tests; sections is [(heading, [sentences])]."""
    if sections is None:
        sections = [("Introduction", ["routing is studied here.", "the kernel is pruned."])]
    return paper_from_record(
        {
            "id": paper_id,
            "title": title,
            "abstract": list(abstract),
            "highlights": list(highlights),
            "keywords": list(keywords),
            "sections": [{"heading": h, "sentences": list(s)} for h, s in sections],
        }
    )


@pytest.fixture(scope="session")
def fixture_corpus():
    """The bundled 50-paper synthetic corpus used by dataset-level tests."""
    return generate_corpus(50, seed=2024)


@pytest.fixture(scope="session")
def small_corpus():
    return generate_corpus(8, seed=77)
