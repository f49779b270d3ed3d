import shutil

import pytest

from fixture_data import DATA, fixture_embeddings
from openintent.data_io import EmbeddingMatrix, read_conllu, read_corpus, write_embeddings


@pytest.fixture(scope="session")
def fixture_corpus():
    return read_corpus(DATA / "corpus.jsonl")


@pytest.fixture(scope="session")
def fixture_parses(fixture_corpus):
    return read_conllu(DATA / "parses.conllu", fixture_corpus)


@pytest.fixture
def workdir(tmp_path):
    """Copy of the fixture corpus + parses plus matching embeddings."""
    shutil.copy(DATA / "corpus.jsonl", tmp_path / "corpus.jsonl")
    shutil.copy(DATA / "parses.conllu", tmp_path / "parses.conllu")
    write_embeddings(EmbeddingMatrix(fixture_embeddings()), tmp_path / "embeddings.emb1")
    return tmp_path
