"""The 8 handcrafted sentence features providing local and global context.

Fixed vector order: abstract_rouge, location, numeric_count, title_score,
keyphrase_score, tf_idf, doc_tf_idf, sentence_length.

Document statistics treat a paper's text as title + abstract + body
sections; highlights are excluded so every feature stays computable on
papers whose gold summary is withheld.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .corpus import LocationCategory, Paper, Sentence, tokenize
from .rouge import DEFAULT_ROUGE, RougeConfig, rouge_l_multi
from .stopwords import default_stopwords

FEATURE_NAMES: tuple[str, ...] = (
    "abstract_rouge",
    "location",
    "numeric_count",
    "title_score",
    "keyphrase_score",
    "tf_idf",
    "doc_tf_idf",
    "sentence_length",
)

_NUMBER_RE = re.compile(r"\d+(?:\.\d+)*")


@dataclass(frozen=True)
class SentenceFeatures:
    abstract_rouge: float
    location: int
    numeric_count: int
    title_score: int
    keyphrase_score: int
    tf_idf: float
    doc_tf_idf: float
    sentence_length: int

    def to_vector(self) -> np.ndarray:
        return np.array(
            [
                self.abstract_rouge,
                float(self.location),
                float(self.numeric_count),
                float(self.title_score),
                float(self.keyphrase_score),
                self.tf_idf,
                self.doc_tf_idf,
                float(self.sentence_length),
            ],
            dtype=np.float64,
        )


def _document_tokens(paper: Paper) -> Iterable[str]:
    yield from paper.title.tokens
    for s in paper.abstract:
        yield from s.tokens
    for section in paper.sections:
        for s in section.sentences:
            yield from s.tokens


def _document_sentences(paper: Paper) -> Iterable[Sentence]:
    yield paper.title
    yield from paper.abstract
    for section in paper.sections:
        yield from section.sentences


@dataclass(frozen=True)
class CorpusStats:
    """Background-corpus document frequencies for the TF-IDF feature."""

    document_frequency: dict[str, int]
    num_documents: int
    stopword_set: frozenset[str]

    @classmethod
    def from_papers(cls, papers: Sequence[Paper], stopwords: frozenset[str] | None = None) -> "CorpusStats":
        if stopwords is None:
            stopwords = default_stopwords()
        df: Counter[str] = Counter()
        for paper in papers:
            df.update(set(_document_tokens(paper)))
        return cls(document_frequency=dict(df), num_documents=len(papers), stopword_set=stopwords)

    def to_json_dict(self) -> dict:
        return {
            "num_documents": self.num_documents,
            "document_frequency": self.document_frequency,
        }

    @classmethod
    def from_json_dict(cls, raw: dict, stopwords: frozenset[str] | None = None) -> "CorpusStats":
        if stopwords is None:
            stopwords = default_stopwords()
        return cls(
            document_frequency={str(k): int(v) for k, v in raw["document_frequency"].items()},
            num_documents=int(raw["num_documents"]),
            stopword_set=stopwords,
        )


@dataclass(frozen=True)
class PaperStats:
    """Within-paper term statistics, computed once per paper and shared."""

    token_counts: dict[str, int]
    total_tokens: int
    num_sentences: int
    sentence_frequency: dict[str, int]

    @classmethod
    def from_paper(cls, paper: Paper) -> "PaperStats":
        counts: Counter[str] = Counter()
        sf: Counter[str] = Counter()
        n_sentences = 0
        for sentence in _document_sentences(paper):
            counts.update(sentence.tokens)
            sf.update(set(sentence.tokens))
            n_sentences += 1
        return cls(
            token_counts=dict(counts),
            total_tokens=sum(counts.values()),
            num_sentences=n_sentences,
            sentence_frequency=dict(sf),
        )


# --- individual features ----------------------------------------------------


def abstract_rouge(tokens: Sequence[str], abstract: Sequence[Sentence], cfg: RougeConfig = DEFAULT_ROUGE) -> float:
    """ROUGE-L F of the sentence against the whole abstract."""
    if not abstract:
        raise ValueError("abstract_rouge requires a non-empty abstract")
    return rouge_l_multi(tokens, [s.tokens for s in abstract], cfg).f_score


def numeric_count(tokens: Sequence[str]) -> int:
    """Number of tokens that are plain integers or decimals."""
    return sum(1 for t in tokens if _NUMBER_RE.fullmatch(t))


def title_score(
    tokens: Sequence[str],
    title: Sentence,
    stopwords: frozenset[str],
    count_types: bool = False,
) -> int:
    """Occurrences of non-stopword title words in the sentence.

    count_types=True counts each distinct overlapping word once instead.
    """
    title_words = {t for t in title.tokens if t not in stopwords}
    if count_types:
        return len(title_words.intersection(tokens))
    return sum(1 for t in tokens if t in title_words)


def _contains_phrase(tokens: Sequence[str], phrase: Sequence[str]) -> bool:
    n = len(phrase)
    if n == 0 or n > len(tokens):
        return False
    return any(tuple(tokens[i : i + n]) == tuple(phrase) for i in range(len(tokens) - n + 1))


def keyphrase_score(tokens: Sequence[str], keywords: Sequence[str]) -> int:
    """How many author keyphrases appear contiguously in the sentence."""
    return sum(1 for kw in keywords if _contains_phrase(tokens, tokenize(kw)))


def tf_idf(tokens: Sequence[str], paper_stats: PaperStats, corpus_stats: CorpusStats) -> float:
    """Mean over non-stopword tokens of tf(w, paper) * ln(N / df(w)).

    tf is the token's count in the whole paper over the paper's token count;
    df is clamped to >= 1 so unseen tokens use the full idf.  An all-stopword
    sentence scores 0.
    """
    stop = corpus_stats.stopword_set
    n_docs = corpus_stats.num_documents
    values = []
    for t in tokens:
        if t in stop:
            continue
        tf = paper_stats.token_counts.get(t, 0) / max(paper_stats.total_tokens, 1)
        df = max(corpus_stats.document_frequency.get(t, 1), 1)
        values.append(tf * math.log(n_docs / df))
    return float(np.mean(values)) if values else 0.0


def doc_tf_idf(
    tokens: Sequence[str],
    paper_stats: PaperStats,
    stopwords: frozenset[str] | None = None,
) -> float:
    """Within-paper TF-IDF with the paper's own sentences as the background.

    Mean over non-stopword tokens of count_in_sentence(w) * ln(S / sf(w)),
    where S is the paper's sentence count and sf(w) the number of those
    sentences containing w (clamped >= 1).  Duplicating the paper elsewhere
    in the corpus cannot change this value.
    """
    if stopwords is None:
        stopwords = default_stopwords()
    in_sentence = Counter(tokens)
    n_sentences = max(paper_stats.num_sentences, 1)
    values = []
    for t in tokens:
        if t in stopwords:
            continue
        sf = max(paper_stats.sentence_frequency.get(t, 1), 1)
        values.append(in_sentence[t] * math.log(n_sentences / sf))
    return float(np.mean(values)) if values else 0.0


def sentence_length(tokens: Sequence[str]) -> int:
    return len(tokens)


def extract_features(
    tokens: Sequence[str],
    location: LocationCategory,
    paper: Paper,
    paper_stats: PaperStats,
    corpus_stats: CorpusStats,
    cfg: RougeConfig = DEFAULT_ROUGE,
) -> SentenceFeatures:
    """All 8 features for one sentence in its paper context."""
    stop = corpus_stats.stopword_set
    return SentenceFeatures(
        abstract_rouge=abstract_rouge(tokens, paper.abstract, cfg),
        location=int(location),
        numeric_count=numeric_count(tokens),
        title_score=title_score(tokens, paper.title, stop),
        keyphrase_score=keyphrase_score(tokens, paper.keywords),
        tf_idf=tf_idf(tokens, paper_stats, corpus_stats),
        doc_tf_idf=doc_tf_idf(tokens, paper_stats, stop),
        sentence_length=sentence_length(tokens),
    )


class FeatureNormalizer(BaseEstimator, TransformerMixin):
    """Per-column z-scoring with statistics taken from the training split.

    Columns with zero standard deviation transform to 0 rather than blowing
    up; transform before fit raises NotFittedError.
    """

    def fit(self, X, y=None):
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2:
            raise ValueError(f"expected a 2-D feature matrix, got shape {X.shape}")
        self.mean_ = X.mean(axis=0)
        self.std_ = X.std(axis=0)
        return self

    def transform(self, X):
        if not hasattr(self, "mean_"):
            raise NotFittedError("FeatureNormalizer must be fitted before transform")
        X = np.asarray(X, dtype=np.float64)
        centered = X - self.mean_
        out = np.zeros_like(centered)
        nonzero = self.std_ > 0
        out[:, nonzero] = centered[:, nonzero] / self.std_[nonzero]
        return out
