"""ROUGE-L: recall/precision/F scoring of token sequences via longest common subsequence.

Used in three places: labeling body sentences against gold highlights when
building datasets, the abstract-overlap sentence feature, and final summary
evaluation.  Multi-sentence references are concatenated into a single token
sequence before comparison (the gold highlights are treated as one summary).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

TokenSeq = Sequence[str]


@dataclass(frozen=True)
class RougeConfig:
    """F-measure weight for ROUGE-L.

    beta > 1 weights recall more heavily; the default 1.0 is the symmetric
    harmonic mean.  Exposed on the evaluation CLI as --rouge-beta.
    """

    beta: float = 1.0

    def __post_init__(self) -> None:
        if self.beta <= 0:
            raise ValueError(f"beta must be positive, got {self.beta}")


@dataclass(frozen=True)
class RougeScore:
    precision: float
    recall: float
    f_score: float


DEFAULT_ROUGE = RougeConfig()

_ZERO = RougeScore(0.0, 0.0, 0.0)


def lcs_length(a: TokenSeq, b: TokenSeq) -> int:
    """Length of a longest common subsequence of two token sequences.

    O(len(a) * len(b)) time, O(min(len(a), len(b))) memory.
    """
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return 0
    # Rolling single row over the shorter sequence.
    prev = [0] * (len(b) + 1)
    curr = [0] * (len(b) + 1)
    for tok_a in a:
        for j, tok_b in enumerate(b, start=1):
            if tok_a == tok_b:
                curr[j] = prev[j - 1] + 1
            else:
                curr[j] = max(prev[j], curr[j - 1])
        prev, curr = curr, prev
    return prev[len(b)]


def rouge_l(candidate: TokenSeq, reference: TokenSeq, cfg: RougeConfig = DEFAULT_ROUGE) -> RougeScore:
    """ROUGE-L of a candidate token sequence against one reference sequence.

    recall = LCS / len(reference), precision = LCS / len(candidate),
    F = (1 + beta^2) * P * R / (R + beta^2 * P).  Empty candidate or
    reference yields an all-zero score.
    """
    if not candidate or not reference:
        return _ZERO
    lcs = lcs_length(candidate, reference)
    if lcs == 0:
        return _ZERO
    precision = lcs / len(candidate)
    recall = lcs / len(reference)
    beta_sq = cfg.beta * cfg.beta
    f = (1.0 + beta_sq) * precision * recall / (recall + beta_sq * precision)
    return RougeScore(precision, recall, f)


def rouge_l_multi(
    candidate: TokenSeq,
    references: Sequence[TokenSeq],
    cfg: RougeConfig = DEFAULT_ROUGE,
) -> RougeScore:
    """ROUGE-L against several reference sentences, concatenated in order.

    The references (e.g. all highlight statements of a paper) are treated as
    a single gold summary; union-LCS is deliberately not used.
    """
    if not references:
        raise ValueError("rouge_l_multi requires at least one reference")
    joined: list[str] = []
    for ref in references:
        joined.extend(ref)
    return rouge_l(candidate, joined, cfg)
