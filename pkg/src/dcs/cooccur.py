"""Keyword co-occurrence graphs from one-document-per-line text."""

from __future__ import annotations

import os
from itertools import combinations

from .errors import EmptyCorpus
from .graph import WeightedGraph

# Deliberately small; pass your own list for serious use.
DEFAULT_STOPWORDS = frozenset(
    """
    a an and are as at be by for from has have in into is it its of on or
    that the their this to via was were with without using based towards
    toward new over under through we our can not no vs versus
    """.split()
)


def tokenize(line):
    return line.lower().split()


def cooccurrence_graph(docs, stopwords=DEFAULT_STOPWORDS, tokenizer=tokenize):
    """Edge weight = 100 * (#docs containing both words) / (#docs).

    Each document contributes a pair at most once.  Blank lines are not
    documents.  Vertex ids follow first appearance in the corpus.
    """
    index = {}
    labels = []
    counts = {}
    n_docs = 0
    for line in docs:
        if not line.strip():
            continue
        n_docs += 1
        ids = set()
        for tok in tokenizer(line):
            if tok in stopwords:
                continue
            if tok not in index:
                index[tok] = len(labels)
                labels.append(tok)
            ids.add(index[tok])
        for u, v in combinations(sorted(ids), 2):
            counts[(u, v)] = counts.get((u, v), 0) + 1
    if n_docs == 0:
        raise EmptyCorpus("corpus has no documents")
    pairs = sorted(counts)
    return WeightedGraph.from_edges(
        labels,
        [u for u, _ in pairs],
        [v for _, v in pairs],
        [100.0 * counts[p] / n_docs for p in pairs],
        check=False,
    )


def load_stopwords(source):
    """``"default"``, ``"none"`` or a path to a whitespace-separated list."""
    if source in (None, "default"):
        return DEFAULT_STOPWORDS
    if source == "none":
        return frozenset()
    if not os.path.exists(source):
        raise FileNotFoundError(source)
    with open(source, encoding="utf-8") as fh:
        return frozenset(fh.read().lower().split())


def ingest_cooccurrence(docs_path, stopwords=DEFAULT_STOPWORDS):
    with open(docs_path, encoding="utf-8") as fh:
        return cooccurrence_graph(fh, stopwords)
