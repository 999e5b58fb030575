"""Skip-gram word embeddings trained with negative sampling, from scratch.

Defaults follow the summariser setup: dimensionality 100, minimum word count
5, context window 20 and a frequent-word downsampling threshold of 0.001.
Training is plain SGD with a linearly decaying learning rate; with a single
worker and a fixed seed it is fully deterministic.  workers > 1 enables a
lock-free mode where threads update the shared weight matrices without
synchronisation, which is faster but not reproducible.

Sentence and abstract vectors are means of non-stopword, in-vocabulary word
vectors; out-of-vocabulary tokens are skipped rather than imputed.
"""

from __future__ import annotations

import threading
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .corpus import Paper, Sentence
from .stopwords import default_stopwords


class EmbeddingError(ValueError):
    pass


@dataclass(frozen=True)
class SkipGramConfig:
    dim: int = 100
    min_count: int = 5
    window: int = 20
    downsample: float = 1e-3
    negative_samples: int = 5
    epochs: int = 5
    learning_rate: float = 0.025
    min_learning_rate: float = 1e-4
    seed: int = 0
    workers: int = 1

    def __post_init__(self) -> None:
        for name in ("dim", "min_count", "window", "negative_samples", "epochs", "workers"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.downsample <= 0 or self.learning_rate <= 0:
            raise ValueError("downsample and learning_rate must be positive")


class EmbeddingTable:
    """Vocabulary plus a |V| x dim float32 vector matrix."""

    def __init__(self, vocabulary: dict[str, int], vectors: np.ndarray):
        if vectors.ndim != 2 or vectors.shape[0] != len(vocabulary):
            raise EmbeddingError(f"vector matrix shape {vectors.shape} does not match vocabulary size {len(vocabulary)}")
        self.vocabulary = vocabulary
        self.vectors = np.asarray(vectors, dtype=np.float32)

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return len(self.vocabulary)

    def __contains__(self, token: str) -> bool:
        return token in self.vocabulary

    def get(self, token: str) -> np.ndarray | None:
        idx = self.vocabulary.get(token)
        return None if idx is None else self.vectors[idx]

    def save(self, path: str | Path) -> None:
        """Text format: header "token_count dim", then token + vector rows.

        Values are written with 9 significant digits, which round-trips
        float32 exactly.
        """
        index_to_token = sorted(self.vocabulary, key=self.vocabulary.get)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"{len(self.vocabulary)} {self.dim}\n")
            for token in index_to_token:
                row = self.vectors[self.vocabulary[token]]
                fh.write(token + " " + " ".join(f"{v:.9g}" for v in row) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "EmbeddingTable":
        with open(path, encoding="utf-8") as fh:
            header = fh.readline().split()
            if len(header) != 2:
                raise EmbeddingError(f"{path}: bad header line")
            count, dim = int(header[0]), int(header[1])
            vocabulary: dict[str, int] = {}
            vectors = np.empty((count, dim), dtype=np.float32)
            for i in range(count):
                parts = fh.readline().split()
                if len(parts) != dim + 1:
                    raise EmbeddingError(f"{path}: row {i} has {len(parts) - 1} values, expected {dim}")
                vocabulary[parts[0]] = i
                vectors[i] = np.array(parts[1:], dtype=np.float32)
        return cls(vocabulary, vectors)


def _build_vocab(sentences: Sequence[Sequence[str]], min_count: int) -> tuple[dict[str, int], np.ndarray]:
    counts = Counter()
    for sent in sentences:
        counts.update(sent)
    kept = [(t, c) for t, c in counts.items() if c >= min_count]
    if not kept:
        raise EmbeddingError(f"no token reaches min_count={min_count}; corpus too small")
    kept.sort(key=lambda tc: (-tc[1], tc[0]))
    vocab = {t: i for i, (t, _) in enumerate(kept)}
    freqs = np.array([c for _, c in kept], dtype=np.float64)
    return vocab, freqs


class _Trainer:
    def __init__(self, cfg: SkipGramConfig, vocab: dict[str, int], freqs: np.ndarray):
        self.cfg = cfg
        self.vocab = vocab
        rng = np.random.default_rng(cfg.seed)
        vocab_size = len(vocab)
        self.syn0 = (rng.random((vocab_size, cfg.dim)) - 0.5) / cfg.dim
        self.syn1 = np.zeros((vocab_size, cfg.dim))
        total = freqs.sum()
        # Frequent-word downsampling: keep probability from the classic
        # (sqrt(f/t) + 1) * t/f schedule, clipped to 1.
        ratio = (freqs / total) / cfg.downsample
        self.keep_prob = np.minimum(1.0, (np.sqrt(ratio) + 1.0) / ratio)
        noise = freqs**0.75
        self.noise_cdf = np.cumsum(noise / noise.sum())
        self.total_tokens = int(total)

    def _sample_negatives(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return np.searchsorted(self.noise_cdf, rng.random(n))

    def train_sentences(
        self,
        sentence_ids: list[np.ndarray],
        rng: np.random.Generator,
        progress_offset: int,
        total_words: int,
    ) -> int:
        cfg = self.cfg
        lr0, lr_min = cfg.learning_rate, cfg.min_learning_rate
        k = cfg.negative_samples
        processed = progress_offset
        for ids in sentence_ids:
            processed += len(ids)
            keep = rng.random(len(ids)) < self.keep_prob[ids]
            ids = ids[keep]
            if len(ids) < 2:
                continue
            lr = max(lr_min, lr0 * (1.0 - processed / (total_words + 1)))
            shrink = rng.integers(0, cfg.window, size=len(ids))
            for i, center in enumerate(ids):
                span = cfg.window - shrink[i]
                contexts = np.concatenate([ids[max(0, i - span) : i], ids[i + 1 : i + 1 + span]])
                if len(contexts) == 0:
                    continue
                negs = self._sample_negatives(rng, len(contexts) * k).reshape(len(contexts), k)
                # Positive target colliding with its own negative sample is
                # skipped by zeroing its label contribution below.
                targets = np.concatenate([contexts, negs.ravel()])
                labels = np.zeros(len(targets))
                labels[: len(contexts)] = 1.0
                valid = np.ones(len(targets), dtype=bool)
                valid[len(contexts) :] = negs.ravel() != np.repeat(contexts, k)
                v = self.syn0[center]
                u = self.syn1[targets]
                scores = 1.0 / (1.0 + np.exp(-(u @ v)))
                g = (labels - scores) * lr * valid
                self.syn0[center] = v + g @ u
                np.add.at(self.syn1, targets, np.outer(g, v))
        return processed


def train_skipgram(sentences: Iterable[Sequence[str]], cfg: SkipGramConfig = SkipGramConfig()) -> EmbeddingTable:
    """Train skip-gram embeddings over an iterable of token lists."""
    sentences = [list(s) for s in sentences]
    if not any(sentences):
        raise EmbeddingError("empty corpus")
    vocab, freqs = _build_vocab(sentences, cfg.min_count)
    trainer = _Trainer(cfg, vocab, freqs)
    sentence_ids = [
        np.array([vocab[t] for t in sent if t in vocab], dtype=np.int64) for sent in sentences
    ]
    sentence_ids = [ids for ids in sentence_ids if len(ids) > 0]
    total_words = trainer.total_tokens * cfg.epochs
    if cfg.workers == 1:
        rng = np.random.default_rng(cfg.seed + 1)
        processed = 0
        for _ in range(cfg.epochs):
            processed = trainer.train_sentences(sentence_ids, rng, processed, total_words)
    else:
        # Lock-free: each worker sweeps its own slice of the corpus per epoch,
        # racing on the shared matrices.  Fast, documented as non-reproducible.
        chunks = [sentence_ids[w :: cfg.workers] for w in range(cfg.workers)]
        chunk_words = [sum(len(i) for i in c) for c in chunks]
        for epoch in range(cfg.epochs):
            threads = []
            for w, chunk in enumerate(chunks):
                rng = np.random.default_rng(cfg.seed + 1 + w + epoch * cfg.workers)
                offset = epoch * trainer.total_tokens + sum(chunk_words[:w])
                threads.append(
                    threading.Thread(target=trainer.train_sentences, args=(chunk, rng, offset, total_words))
                )
            for t in threads:
                t.start()
            for t in threads:
                t.join()
    return EmbeddingTable(vocab, trainer.syn0.astype(np.float32))


def _mean_vector(tokens: Iterable[str], table: EmbeddingTable, stopwords: frozenset[str]) -> np.ndarray:
    rows = [table.vocabulary[t] for t in tokens if t not in stopwords and t in table.vocabulary]
    if not rows:
        return np.zeros(table.dim)
    return table.vectors[rows].astype(np.float64).mean(axis=0)


def sentence_vector(tokens: Sequence[str], table: EmbeddingTable, stopwords: frozenset[str] | None = None) -> np.ndarray:
    """Mean of in-vocabulary non-stopword word vectors; zero vector if none qualify."""
    if stopwords is None:
        stopwords = default_stopwords()
    return _mean_vector(tokens, table, stopwords)


def abstract_vector(
    abstract: Sequence[Sentence],
    table: EmbeddingTable,
    stopwords: frozenset[str] | None = None,
) -> np.ndarray:
    """Token-weighted mean over every qualifying token of the whole abstract."""
    if stopwords is None:
        stopwords = default_stopwords()
    tokens = [t for s in abstract for t in s.tokens]
    return _mean_vector(tokens, table, stopwords)


class SkipGramModel(BaseEstimator, TransformerMixin):
    """Estimator wrapper: fit on token lists, transform them to mean vectors."""

    def __init__(
        self,
        dim: int = 100,
        min_count: int = 5,
        window: int = 20,
        downsample: float = 1e-3,
        negative_samples: int = 5,
        epochs: int = 5,
        learning_rate: float = 0.025,
        seed: int = 0,
        workers: int = 1,
    ):
        self.dim = dim
        self.min_count = min_count
        self.window = window
        self.downsample = downsample
        self.negative_samples = negative_samples
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.seed = seed
        self.workers = workers

    def _config(self) -> SkipGramConfig:
        return SkipGramConfig(
            dim=self.dim,
            min_count=self.min_count,
            window=self.window,
            downsample=self.downsample,
            negative_samples=self.negative_samples,
            epochs=self.epochs,
            learning_rate=self.learning_rate,
            seed=self.seed,
            workers=self.workers,
        )

    def fit(self, X: Iterable[Sequence[str]], y=None):
        self.table_ = train_skipgram(X, self._config())
        return self

    def transform(self, X: Iterable[Sequence[str]]) -> np.ndarray:
        stop = default_stopwords()
        return np.stack([sentence_vector(tokens, self.table_, stop) for tokens in X])


def corpus_token_stream(papers: Sequence[Paper]) -> list[list[str]]:
    """Sentence token lists for embedding training: title, abstract,
    highlights and body of every paper, in document order."""
    stream: list[list[str]] = []
    for paper in papers:
        stream.append(list(paper.title.tokens))
        for s in paper.abstract:
            stream.append(list(s.tokens))
        for s in paper.highlights:
            stream.append(list(s.tokens))
        for section in paper.sections:
            for s in section.sentences:
                stream.append(list(s.tokens))
    return stream
