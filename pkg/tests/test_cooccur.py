import io

import pytest

from dcs.cooccur import DEFAULT_STOPWORDS, cooccurrence_graph, load_stopwords
from dcs.errors import EmptyCorpus


def build(text, stopwords=frozenset()):
    return cooccurrence_graph(io.StringIO(text), stopwords)


def test_pair_weight():
    g = build("social networks\nsocial networks mining\n")
    assert g.labelled_edges()[("social", "networks")] == 100.0
    assert g.labelled_edges()[("social", "mining")] == 50.0


def test_no_cooccurrence_no_edge():
    g = build("alpha\nbeta\n")
    assert g.m == 0
    assert g.labels == ["alpha", "beta"]


def test_repeated_token_counts_once():
    g = build("graph graph mining\n")
    assert g.labelled_edges() == {("graph", "mining"): 100.0}


def test_lowercase_and_stopwords():
    g = build("Mining OF Graphs\n", DEFAULT_STOPWORDS)
    assert g.labelled_edges() == {("mining", "graphs"): 100.0}


def test_blank_lines_are_not_documents():
    g = build("a b\n\n   \na c\n")
    assert g.labelled_edges()[("a", "b")] == 50.0


def test_empty_corpus():
    with pytest.raises(EmptyCorpus):
        build("\n\n")


def test_load_stopwords(tmp_path):
    assert load_stopwords("default") is DEFAULT_STOPWORDS
    assert load_stopwords("none") == frozenset()
    p = tmp_path / "stop.txt"
    p.write_text("Foo bar\nbaz\n")
    assert load_stopwords(str(p)) == {"foo", "bar", "baz"}
    with pytest.raises(FileNotFoundError):
        load_stopwords(str(tmp_path / "missing"))
