"""Reference extractive summarisers: SumBasic, KLSum, TextRank, LexRank, LSA.

All of them operate on a paper's body text only (the abstract is already a
summary and is never a selection candidate), are deterministic given the
paper and config, and return exactly min(k, body size) distinct sentences in
document order.
"""

from __future__ import annotations

import math
import warnings
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .corpus import BodySentence, Paper, body_sentences


@dataclass(frozen=True)
class BaselineConfig:
    damping: float = 0.85
    power_iteration_tolerance: float = 1e-6
    lexrank_threshold: float = 0.1
    lsa_topic_count: int = 3

    def __post_init__(self) -> None:
        if not 0 < self.damping < 1:
            raise ValueError(f"damping must be in (0, 1), got {self.damping}")
        if self.power_iteration_tolerance <= 0:
            raise ValueError("power_iteration_tolerance must be positive")
        if self.lsa_topic_count < 1:
            raise ValueError("lsa_topic_count must be >= 1")


def _candidates(paper: Paper) -> list[BodySentence]:
    body = body_sentences(paper)
    if not body:
        raise ValueError(f"paper {paper.id!r} has no body sentences to summarise")
    return body


def _take_top(body: Sequence[BodySentence], scores: Sequence[float], k: int) -> list[BodySentence]:
    """Top-k by score, ties by document order, returned in document order."""
    k = min(k, len(body))
    if k <= 0:
        return []
    ranked = sorted(range(len(body)), key=lambda i: (-scores[i], body[i].position))
    return sorted((body[i] for i in ranked[:k]), key=lambda b: b.position)


def sumbasic(paper: Paper, k: int, config: BaselineConfig = BaselineConfig()) -> list[BodySentence]:
    """Counting-based selection: repeatedly pick the sentence with the highest
    mean word probability, then square the probabilities of its words."""
    body = _candidates(paper)
    counts = Counter(t for b in body for t in b.tokens)
    total = sum(counts.values())
    probs = {w: c / total for w, c in counts.items()}
    chosen: list[BodySentence] = []
    remaining = list(body)
    while remaining and len(chosen) < k:
        best = max(remaining, key=lambda b: (sum(probs[t] for t in b.tokens) / len(b.tokens), -b.position))
        chosen.append(best)
        remaining.remove(best)
        for t in set(best.tokens):
            probs[t] = probs[t] ** 2
    return sorted(chosen, key=lambda b: b.position)


def _kl_divergence(doc_probs: dict[str, float], summary_counts: Counter, vocab: Sequence[str]) -> float:
    # Add-one smoothing over the document vocabulary keeps q positive.
    total = sum(summary_counts.values()) + len(vocab)
    kl = 0.0
    for w in vocab:
        p = doc_probs[w]
        q = (summary_counts[w] + 1) / total
        kl += p * math.log(p / q)
    return kl


def klsum(paper: Paper, k: int, config: BaselineConfig = BaselineConfig()) -> list[BodySentence]:
    """Greedy selection minimising KL(document unigrams || summary unigrams)."""
    body = _candidates(paper)
    counts = Counter(t for b in body for t in b.tokens)
    total = sum(counts.values())
    doc_probs = {w: c / total for w, c in counts.items()}
    vocab = sorted(doc_probs)
    chosen: list[BodySentence] = []
    summary_counts: Counter = Counter()
    remaining = list(body)
    while remaining and len(chosen) < k:
        best = None
        best_kl = math.inf
        for b in remaining:  # document order, so ties keep the earlier sentence
            trial = summary_counts + Counter(b.tokens)
            kl = _kl_divergence(doc_probs, trial, vocab)
            if best is None or kl < best_kl - 1e-15:
                best, best_kl = b, kl
        chosen.append(best)
        remaining.remove(best)
        summary_counts.update(best.tokens)
    return sorted(chosen, key=lambda b: b.position)


def _pagerank(weights: np.ndarray, damping: float, tol: float, max_iter: int = 200) -> np.ndarray:
    """Damped power iteration over a non-negative weight matrix.

    Rows with zero out-weight distribute uniformly, so the stationary vector
    is a proper distribution (sums to 1).
    """
    n = weights.shape[0]
    if n == 1:
        return np.ones(1)
    out = weights.sum(axis=1)
    has_out = out > 0
    transition = np.zeros_like(weights, dtype=np.float64)
    transition[has_out] = weights[has_out] / out[has_out, None]
    rank = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        dangling_mass = rank[~has_out].sum()
        new_rank = (1.0 - damping) / n + damping * (transition.T @ rank + dangling_mass / n)
        if np.abs(new_rank - rank).sum() < tol:
            return new_rank
        rank = new_rank
    return rank


def textrank(paper: Paper, k: int, config: BaselineConfig = BaselineConfig()) -> list[BodySentence]:
    """Graph ranking with edge weight = shared-token count normalised by the
    sum of log sentence lengths."""
    body = _candidates(paper)
    n = len(body)
    token_sets = [set(b.tokens) for b in body]
    log_len = [math.log(len(b.tokens)) if len(b.tokens) > 1 else 0.0 for b in body]
    weights = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            denom = log_len[i] + log_len[j]
            if denom <= 0:
                continue
            overlap = len(token_sets[i] & token_sets[j])
            if overlap:
                weights[i, j] = weights[j, i] = overlap / denom
    ranks = _pagerank(weights, config.damping, config.power_iteration_tolerance)
    return _take_top(body, ranks, k)


def _tf_idf_matrix(body: Sequence[BodySentence]) -> np.ndarray:
    """Sentence (rows) x term TF-IDF matrix, idf over the paper's own sentences."""
    vocab = sorted({t for b in body for t in b.tokens})
    index = {t: j for j, t in enumerate(vocab)}
    n = len(body)
    sf = Counter(t for b in body for t in set(b.tokens))
    mat = np.zeros((n, len(vocab)))
    for i, b in enumerate(body):
        for t, c in Counter(b.tokens).items():
            mat[i, index[t]] = c * math.log(n / sf[t]) if sf[t] < n else 0.0
    return mat


def lexrank(paper: Paper, k: int, config: BaselineConfig = BaselineConfig()) -> list[BodySentence]:
    """TF-IDF cosine graph, binarised at the threshold, then damped ranking."""
    body = _candidates(paper)
    mat = _tf_idf_matrix(body)
    norms = np.linalg.norm(mat, axis=1)
    safe = np.where(norms > 0, norms, 1.0)
    unit = mat / safe[:, None]
    sim = unit @ unit.T
    np.fill_diagonal(sim, 0.0)
    adjacency = (sim >= config.lexrank_threshold).astype(np.float64)
    ranks = _pagerank(adjacency, config.damping, config.power_iteration_tolerance)
    return _take_top(body, ranks, k)


def lsa_summarise(paper: Paper, k: int, config: BaselineConfig = BaselineConfig()) -> list[BodySentence]:
    """SVD of the term-sentence count matrix; each sentence scores by the
    singular-value-weighted length of its row in the top topic space."""
    body = _candidates(paper)
    vocab = sorted({t for b in body for t in b.tokens})
    index = {t: j for j, t in enumerate(vocab)}
    mat = np.zeros((len(vocab), len(body)))
    for j, b in enumerate(body):
        for t, c in Counter(b.tokens).items():
            mat[index[t], j] = c
    _, sigma, vt = np.linalg.svd(mat, full_matrices=False)
    rank = int(np.sum(sigma > sigma[0] * 1e-12)) if sigma.size and sigma[0] > 0 else 0
    if rank == 0:
        warnings.warn(f"paper {paper.id!r}: degenerate term matrix; falling back to term-frequency ranking")
        scores = mat.sum(axis=0)
    else:
        r = min(config.lsa_topic_count, rank)
        weighted = (sigma[:r, None] * vt[:r]) ** 2
        scores = np.sqrt(weighted.sum(axis=0))
    return _take_top(body, scores, k)


BASELINES = {
    "sumbasic": sumbasic,
    "klsum": klsum,
    "textrank": textrank,
    "lexrank": lexrank,
    "lsa": lsa_summarise,
}
