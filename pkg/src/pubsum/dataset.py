"""Labeled-instance dataset builders: base and ROUGE-extended variants.

The base dataset takes each paper's highlight statements as positives and an
equal number of negatives sampled from the bottom 10% of body sentences by
ROUGE-L against the highlights.  The extended variant additionally labels
the top-k highest-ROUGE body sentences positive and draws negatives
deterministically from the bottom of the ranking, then splits instances per
paper into train/test portions stratified by label.

Abstract sentences never enter either dataset, positive and negative labels
never touch the same sentence of a paper, and per-paper label counts always
balance.  Same seed means byte-identical serialized output.
"""

from __future__ import annotations

import functools
import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .corpus import BodySentence, LocationCategory, Paper, Sentence, body_sentences
from .parallel import parallel_map
from .rouge import DEFAULT_ROUGE, RougeConfig, rouge_l_multi


class DatasetError(ValueError):
    pass


@dataclass(frozen=True)
class LabeledInstance:
    paper_id: str
    sentence: Sentence
    location: LocationCategory
    label: int  # 1 = summary sentence, 0 = not
    rouge_vs_highlights: float


@dataclass(frozen=True)
class DatasetSpec:
    top_k_positives: int = 20
    negative_pool_fraction: float = 0.10
    seed: int = 0
    train_fraction_ext: float = 2.0 / 3.0
    negative_shuffle: bool = False

    def __post_init__(self) -> None:
        if self.top_k_positives < 1:
            raise ValueError("top_k_positives must be >= 1")
        if not 0 < self.negative_pool_fraction <= 1:
            raise ValueError("negative_pool_fraction must be in (0, 1]")
        if not 0 < self.train_fraction_ext < 1:
            raise ValueError("train_fraction_ext must be in (0, 1)")


@dataclass(frozen=True)
class ScoredSentence:
    body: BodySentence
    score: float


def _paper_rng(seed: int, paper_id: str) -> np.random.Generator:
    # Stable per-paper stream so corpus order cannot change sampling.
    digest = hashlib.blake2b(f"{seed}:{paper_id}".encode("utf-8"), digest_size=8).digest()
    return np.random.default_rng(int.from_bytes(digest, "big"))


def score_body_sentences(paper: Paper, cfg: RougeConfig = DEFAULT_ROUGE) -> list[ScoredSentence]:
    """Every body sentence scored against the highlights, best first.

    Ties break by document order (earlier first).  Abstract and highlight
    sentences are not body sentences and never appear.
    """
    body = body_sentences(paper)
    if not body:
        raise DatasetError(f"paper {paper.id!r} has no body sentences to score")
    refs = [h.tokens for h in paper.highlights]
    scored = [ScoredSentence(b, rouge_l_multi(b.tokens, refs, cfg).f_score) for b in body]
    scored.sort(key=lambda s: (-s.score, s.body.position))
    return scored


def _instance(paper: Paper, body: BodySentence, label: int, score: float) -> LabeledInstance:
    return LabeledInstance(
        paper_id=paper.id,
        sentence=body.sentence,
        location=body.category,
        label=label,
        rouge_vs_highlights=score,
    )


def _highlight_instances(paper: Paper, cfg: RougeConfig) -> list[LabeledInstance]:
    refs = [h.tokens for h in paper.highlights]
    out = []
    for h in paper.highlights:
        score = rouge_l_multi(h.tokens, refs, cfg).f_score
        out.append(
            LabeledInstance(
                paper_id=paper.id,
                sentence=h,
                location=LocationCategory.HIGHLIGHT,
                label=1,
                rouge_vs_highlights=score,
            )
        )
    return out


def _base_paper_instances(paper: Paper, spec: DatasetSpec, cfg: RougeConfig) -> list[LabeledInstance]:
    scored = score_body_sentences(paper, cfg)
    positives = _highlight_instances(paper, cfg)
    needed = len(positives)
    # Worst summaries first; ties by document order.
    ascending = sorted(scored, key=lambda s: (s.score, s.body.position))
    rng = _paper_rng(spec.seed, paper.id)
    pool = ascending[: max(1, math.floor(len(ascending) * spec.negative_pool_fraction))]
    if len(pool) < needed:
        pool = ascending[: max(1, math.floor(len(ascending) * 2 * spec.negative_pool_fraction))]
    if len(pool) < needed:
        raise DatasetError(
            f"paper {paper.id!r}: bottom-20% pool of {len(pool)} sentences "
            f"cannot supply {needed} negatives"
        )
    picks = rng.choice(len(pool), size=needed, replace=False)
    negatives = [_instance(paper, pool[i].body, 0, pool[i].score) for i in sorted(picks)]
    return positives + negatives


def build_cspubsum(
    papers: Sequence[Paper],
    spec: DatasetSpec = DatasetSpec(),
    cfg: RougeConfig = DEFAULT_ROUGE,
    jobs: int = 1,
) -> list[LabeledInstance]:
    """Base dataset: highlights as positives, matched negatives from the
    bottom 10% of body sentences (widened to 20% if that pool is too small)."""
    worker = functools.partial(_base_paper_instances, spec=spec, cfg=cfg)
    instances = [inst for group in parallel_map(worker, papers, jobs) for inst in group]
    shuffle_rng = np.random.default_rng(spec.seed)
    shuffle_rng.shuffle(instances)  # randomly ordered training list
    return instances


def _ext_paper_instances(
    paper: Paper,
    spec: DatasetSpec,
    cfg: RougeConfig,
) -> tuple[list[LabeledInstance], list[LabeledInstance]]:
    """Positives (top-k body + highlights) and matched negatives for one paper."""
    scored = score_body_sentences(paper, cfg)
    n_body = len(scored)
    n_high = len(paper.highlights)
    k = min(spec.top_k_positives, n_body)
    if k == n_body:
        # Degenerate short paper: leave enough sentences to balance without
        # ever giving one sentence both labels.
        k = max(0, (n_body - n_high) // 2)
        if n_high + k > n_body - k:
            raise DatasetError(
                f"paper {paper.id!r}: {n_body} body sentences cannot balance "
                f"{n_high} highlight positives"
            )
    positives = [_instance(paper, s.body, 1, s.score) for s in scored[:k]]
    positives.extend(_highlight_instances(paper, cfg))
    # Remaining body sentences, worst first; ties by document order.
    pool = sorted(scored[k:], key=lambda s: (s.score, s.body.position))
    needed = len(positives)
    if spec.negative_shuffle:
        rng = _paper_rng(spec.seed, paper.id)
        window = pool[: min(len(pool), 2 * needed)]
        picks = sorted(rng.choice(len(window), size=min(needed, len(window)), replace=False))
        chosen = [window[i] for i in picks]
    else:
        chosen = pool[:needed]
    # Short papers: cycle the bottom pool deterministically to keep balance.
    i = 0
    while len(chosen) < needed:
        chosen.append(pool[i % len(pool)])
        i += 1
    negatives = [_instance(paper, s.body, 0, s.score) for s in chosen]
    return positives, negatives


def _stratified_split(
    positives: list[LabeledInstance],
    negatives: list[LabeledInstance],
    fraction: float,
    rng: np.random.Generator,
) -> tuple[list[LabeledInstance], list[LabeledInstance]]:
    train: list[LabeledInstance] = []
    test: list[LabeledInstance] = []
    for group in (positives, negatives):
        order = rng.permutation(len(group))
        cut = int(len(group) * fraction)
        train.extend(group[i] for i in order[:cut])
        test.extend(group[i] for i in order[cut:])
    return train, test


def _ext_paper_split(
    paper: Paper, spec: DatasetSpec, cfg: RougeConfig
) -> tuple[list[LabeledInstance], list[LabeledInstance]]:
    positives, negatives = _ext_paper_instances(paper, spec, cfg)
    rng = _paper_rng(spec.seed, paper.id)
    return _stratified_split(positives, negatives, spec.train_fraction_ext, rng)


def build_cspubsumext(
    papers: Sequence[Paper],
    spec: DatasetSpec = DatasetSpec(),
    cfg: RougeConfig = DEFAULT_ROUGE,
    jobs: int = 1,
) -> tuple[list[LabeledInstance], list[LabeledInstance]]:
    """Extended dataset: per paper, top-k body sentences by highlight ROUGE
    plus the highlights as positives, equally many bottom-ranked negatives,
    split per paper into train/test stratified by label."""
    train: list[LabeledInstance] = []
    test: list[LabeledInstance] = []
    worker = functools.partial(_ext_paper_split, spec=spec, cfg=cfg)
    for paper_train, paper_test in parallel_map(worker, papers, jobs):
        train.extend(paper_train)
        test.extend(paper_test)
    shuffle_rng = np.random.default_rng(spec.seed)
    shuffle_rng.shuffle(train)
    shuffle_rng.shuffle(test)
    return train, test


# --- serialization -----------------------------------------------------------


def instance_to_record(inst: LabeledInstance) -> dict:
    return {
        "paper_id": inst.paper_id,
        "label": inst.label,
        "location": int(inst.location),
        "rouge_vs_highlights": inst.rouge_vs_highlights,
        "sentence": inst.sentence.raw_text,
        "index_in_section": inst.sentence.index_in_section,
    }


def instance_from_record(record: dict) -> LabeledInstance:
    return LabeledInstance(
        paper_id=record["paper_id"],
        sentence=Sentence.from_text(record["sentence"], record.get("index_in_section", 0)),
        location=LocationCategory(record["location"]),
        label=int(record["label"]),
        rouge_vs_highlights=float(record["rouge_vs_highlights"]),
    )


def save_instances(instances: Iterable[LabeledInstance], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for inst in instances:
            fh.write(json.dumps(instance_to_record(inst), ensure_ascii=False))
            fh.write("\n")


def load_instances(path: str | Path) -> list[LabeledInstance]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                out.append(instance_from_record(json.loads(line)))
    return out
