"""Synthetic corpus generator: a desk-scale stand-in for a real paper corpus.

Each paper threads a per-paper topic vocabulary through its title, abstract,
highlights and body so that labeling, features and learning all have real
signal.  Body sentences come in four planted kinds:

  summary   exactly 10 per paper (verbatim highlight copies replace some):
            keyword phrase + graded topic words + summary vocabulary, the
            intended extractive summary at budget 10;
  medium    topical but not summary-worthy, the grey zone of the ranking;
  distractor near-copies of abstract-only methodology content with numeric
            tokens: high abstract overlap but low highlight overlap, i.e.
            sentences a model must learn to demote from labeled body data;
  filler    procedural noise sharing no token with the highlights.

Per-section overlap weights steer where summary sentences (and verbatim
highlight copies) land.  Generation uses only random.Random, so a seed fully
determines the corpus.
"""

from __future__ import annotations

import json
import random
from pathlib import Path
from typing import Iterable

from .corpus import Paper, paper_from_record

TOPIC_WORDS = (
    "adaptive", "allocation", "anomaly", "architecture", "attention", "bandwidth",
    "benchmark", "cache", "caching", "classifier", "cluster", "clustering",
    "compression", "concurrency", "consensus", "convergence", "convolution",
    "coverage", "database", "decoding", "dependency", "descriptor", "detection",
    "diffusion", "distillation", "eigenvalue", "embedding", "encoding",
    "encryption", "entropy", "estimation", "extraction", "failover", "fairness",
    "feedback", "filtering", "firmware", "fusion", "gateway", "gradient",
    "graph", "hashing", "heuristic", "hierarchy", "hypergraph", "indexing",
    "inference", "interpolation", "kernel", "labeling", "latency", "lattice",
    "learning", "locality", "manifold", "mapping", "matching", "membership",
    "migration", "mixture", "modeling", "modularity", "monitoring", "multicast",
    "mutation", "network", "normalization", "optimization", "ordering",
    "packet", "parallelism", "parsing", "partition", "pipeline", "placement",
    "planning", "pooling", "prediction", "prefetching", "privacy", "profiling",
    "propagation", "protocol", "pruning", "quantization", "query", "queue",
    "ranking", "reasoning", "recognition", "reconstruction", "recovery",
    "recursion", "redundancy", "regression", "regularization", "reliability",
    "replication", "representation", "resilience", "resolution", "retrieval",
    "robustness", "routing", "sampling", "scalability", "scheduling",
    "segmentation", "semantics", "sensing", "serialization", "sharding",
    "similarity", "simulation", "sparsity", "spectrum", "stability",
    "streaming", "synchronization", "synthesis", "throughput", "topology",
    "tracing", "tracking", "traffic", "training", "transfer", "translation",
    "traversal", "tuning", "validation", "variance", "vectorization",
    "verification", "virtualization", "workload",
)

# Methodology aspects: appear only in abstracts and distractor sentences.
ASPECT_WORDS = (
    "annealing", "bootstrapping", "calibration", "checkpointing", "curation",
    "deduplication", "initialisation", "instrumentation", "logging",
    "orchestration", "preprocessing", "provisioning", "quantisation-aware",
    "reweighting", "smoothing", "staging", "telemetry", "tokenisation",
    "warmup", "whitening",
)

# Filler vocabulary shares no token with highlight or abstract templates.
FILLER_WORDS = (
    "trial", "trials", "runs", "setup", "machine", "machines", "server",
    "servers", "workstation", "cores", "sockets", "gigabyte", "megabyte",
    "seconds", "milliseconds", "minutes", "hours", "duration", "elapsed",
    "counter", "counters", "variable", "variables", "constant", "constants",
    "loop", "loops", "array", "arrays", "buffer", "buffers", "register",
    "registers", "flag", "flags", "timer", "timers", "interval", "intervals",
    "slot", "slots", "batch", "batches", "round", "rounds", "phase", "phases",
    "unit", "units", "item", "items", "entry", "entries",
    "field", "fields", "file", "files", "folder", "folders", "disk", "disks",
    "rack", "racks", "port", "ports", "cable", "cables", "fan", "fans",
    "chassis", "panel", "panels", "knob", "knobs", "dial", "dials", "switch",
    "switches", "lamp", "lamps",
)

MEDIUM_VOCAB = (
    "setting", "described", "relation", "configuration", "context", "detail",
    "details", "respect", "manner", "basis", "variant", "variants", "aspect",
    "aspects", "notion", "extent",
)

SUMMARY_NOUNS = ("framework", "technique", "strategy", "scheme", "procedure")
SUMMARY_VERBS = ("improves", "outperforms", "reduces", "enhances", "accelerates")
METRICS = ("performance", "accuracy", "quality", "efficiency", "effectiveness")

SUMMARY_SENTENCES_PER_PAPER = 10
MEDIUM_SENTENCES_PER_PAPER = 20
DISTRACTOR_SENTENCES_PER_PAPER = 4

DEFAULT_OVERLAP = {
    "introduction": 0.20,
    "method": 0.08,
    "results": 0.27,
    "conclusion": 0.40,
    "other": 0.05,
}

_SECTION_HEADINGS = {
    "introduction": ("1. Introduction", "Introduction", "1 Introduction and Background"),
    "method": ("2. Methods", "Methodology", "2. Approach", "Model Design"),
    "results": ("3. Experimental Results", "Results and Discussion", "Evaluation", "4. Analysis"),
    "conclusion": ("Conclusion", "Conclusion and Future Work", "5. Summary"),
    "other": ("Related Work", "Threats to Validity", "Acknowledgements"),
}

_SECTION_SIZES = {"introduction": 13, "method": 13, "results": 11, "conclusion": 9, "other": 5}


def _keyword_pair(rng: random.Random, keywords: list[str]) -> tuple[str, str]:
    a, b = rng.choice(keywords).split()
    return a, b


def _highlight_sentence(rng: random.Random, topic: list[str], keywords: list[str], metric: str) -> str:
    # Content words come from the title-topic half, so grey-zone body
    # sentences built on the other half can never echo a highlight n-gram.
    c, d = rng.sample(topic[:6], 2)
    noun = rng.choice(SUMMARY_NOUNS)
    verb = rng.choice(SUMMARY_VERBS)
    a, b = _keyword_pair(rng, keywords)
    templates = (
        f"We propose a {a} {b} {noun} that {verb} {c} {d} {metric}.",
        f"We demonstrate that the {a} {b} {noun} {verb} {c} {metric}.",
        f"Our {a} {b} {noun} ensures that {c} {d} {metric} holds on every benchmark.",
        f"We show that {a} {b} {verb} robust {c} {d} {metric}.",
    )
    return rng.choice(templates)


def _abstract_topic_sentence(rng: random.Random, topic: list[str], metric: str) -> str:
    a, b, c, d = rng.sample(topic, 4)
    noun = rng.choice(SUMMARY_NOUNS)
    verb = rng.choice(SUMMARY_VERBS)
    templates = (
        f"This paper presents a {a} {b} {noun} for {c} {d}.",
        f"The proposed {noun} {verb} {a} {b} and overall {metric}.",
        f"We study {a} {b} with emphasis on {c} {d} {metric}.",
    )
    return rng.choice(templates)


def _aspect_sentence(rng: random.Random, aspects: list[str]) -> str:
    # No token here (besides punctuation-free scaffolding) may appear in a
    # highlight template: distractors copy these lines and must stay pinned
    # to the bottom of the highlight-overlap ranking.
    a0, a1, a2 = rng.sample(aspects, 3)
    templates = (
        f"{a0.capitalize()} staging applies {a1} and {a2} before each measurement pass.",
        f"Input streams undergo {a0} followed by {a1} {a2} at load time.",
        f"Data handling includes {a0} {a1} plus additional {a2} beforehand.",
    )
    return rng.choice(templates)


def _summary_sentence(
    rng: random.Random, topic: list[str], keywords: list[str], metric: str, grade: int
) -> str:
    """Summary-worthy planted sentence; grade controls extra topic words."""
    a, b = _keyword_pair(rng, keywords)
    extra = rng.sample(topic, min(grade, len(topic)))
    noun = rng.choice(SUMMARY_NOUNS)
    verb = rng.choice(SUMMARY_VERBS)
    marker = rng.choice(("We propose", "We demonstrate", "We conclude", "Our findings indicate"))
    body = " ".join(extra)
    return f"{marker} that the {a} {b} {noun} {verb} {body} {metric}."


def _medium_sentence(rng: random.Random, topic: list[str], metric: str) -> str:
    # Non-title topic words only: topical, but visibly short of summary
    # grade.  "that" plus the paper's metric word pins the highlight overlap
    # strictly above any distractor without approaching summary territory.
    a, b, c = rng.sample(topic[6:], 3)
    m1, m2 = rng.sample(MEDIUM_VOCAB, 2)
    templates = (
        f"The {a} {b} {m1} suggests that {metric} stays marginal under {c}.",
        f"Prior work noted that the {a} {b} {m1} barely shifts {metric}.",
        f"One {m1} of the {a} {b} concerns that minor {metric} drift.",
        f"This {m1} assumes that {a} {b} variation is background {metric} noise.",
    )
    return rng.choice(templates)


def _distractor_sentence(rng: random.Random, aspect_texts: list[str]) -> str:
    # Rehash abstract methodology with concrete settings: strong abstract
    # overlap, numbers, no keyword or title content.  "that"/"every" keep the
    # highlight overlap strictly above the all-filler floor.
    base = rng.choice(aspect_texts).rstrip(".")
    value = f"{rng.uniform(0.05, 0.95):.2f}"
    count = rng.randint(2, 40)
    return f"{base} so that thresholds stay near {value} across {count} repetitions."


def _filler_sentence(rng: random.Random) -> str:
    f1, f2, f3 = (rng.choice(FILLER_WORDS) for _ in range(3))
    templates = (
        f"Each {f1} {f2} remained steady throughout {f3} preparation.",
        f"Lab {f1} {f2} stayed idle between consecutive {f3} checks.",
        f"Several {f1} {f2} required manual {f3} cleanup afterwards.",
        f"Technicians recorded {f1} {f2} readings inside separate {f3} logs.",
    )
    return rng.choice(templates)


def _allocate(rng: random.Random, total: int, weights: dict[str, float], roles: list[str]) -> dict[str, int]:
    counts = {role: 0 for role in roles}
    w = [weights.get(r, 0.0) or 1e-9 for r in roles]
    for _ in range(total):
        counts[rng.choices(roles, weights=w)[0]] += 1
    return counts


def generate_paper_record(
    rng: random.Random,
    index: int,
    overlap: dict[str, float],
    copy_rate: float,
) -> dict:
    topic = rng.sample(TOPIC_WORDS, 10)
    aspects = rng.sample(ASPECT_WORDS, 4)
    metric = rng.choice(METRICS)  # the paper's headline metric, used throughout
    title = f"{topic[0].capitalize()} {topic[1]} with {topic[2]} {topic[3]} for {topic[4]} {topic[5]}"
    keywords = [f"{topic[2 * i]} {topic[2 * i + 1]}" for i in range(rng.randint(2, 3))]
    highlights = [_highlight_sentence(rng, topic, keywords, metric) for _ in range(rng.randint(3, 5))]
    aspect_texts = [_aspect_sentence(rng, aspects) for _ in range(2)]
    abstract = [_abstract_topic_sentence(rng, topic, metric) for _ in range(2)] + aspect_texts

    n_copies = rng.randint(1, 2) if rng.random() < copy_rate else 0
    n_copies = min(n_copies, len(highlights))
    copies = rng.sample(highlights, n_copies)
    grades = [4, 4, 5, 5, 5, 6, 6, 6, 7, 7]
    rng.shuffle(grades)
    summary_sentences = [
        _summary_sentence(rng, topic, keywords, metric, g)
        for g in grades[: SUMMARY_SENTENCES_PER_PAPER - n_copies]
    ] + copies
    rng.shuffle(summary_sentences)

    roles = ["introduction", "method", "results", "conclusion"]
    if rng.random() < 0.5:
        roles.append("other")
    # Mediums follow the same section distribution as summary sentences so
    # location alone cannot promote them into a summary.
    summary_alloc = _allocate(rng, len(summary_sentences), overlap, roles)
    medium_alloc = _allocate(rng, MEDIUM_SENTENCES_PER_PAPER, overlap, roles)
    distractor_alloc = _allocate(
        rng, DISTRACTOR_SENTENCES_PER_PAPER, {"method": 0.75, "results": 0.25}, roles
    )

    # Pack sentences into sections of fixed size; a sentence overflowing its
    # preferred section moves to the one with the most free space, and filler
    # pads the remainder.
    buckets: dict[str, list[str]] = {role: [] for role in roles}
    free = {role: _SECTION_SIZES[role] for role in roles}

    def place(sentence: str, role: str) -> None:
        if free[role] <= 0:
            role = max(roles, key=lambda r: free[r])
        buckets[role].append(sentence)
        free[role] -= 1

    summary_iter = iter(summary_sentences)
    for role in roles:
        for _ in range(summary_alloc[role]):
            place(next(summary_iter), role)
    for role in roles:
        for _ in range(distractor_alloc[role]):
            place(_distractor_sentence(rng, aspect_texts), role)
    for role in roles:
        for _ in range(medium_alloc[role]):
            place(_medium_sentence(rng, topic, metric), role)

    sections = []
    for role in roles:
        sentences = buckets[role] + [_filler_sentence(rng) for _ in range(free[role])]
        rng.shuffle(sentences)
        sections.append({"heading": rng.choice(_SECTION_HEADINGS[role]), "sentences": sentences})

    return {
        "id": f"paper-{index:04d}",
        "title": title,
        "abstract": abstract,
        "highlights": highlights,
        "keywords": keywords,
        "sections": sections,
    }


def generate_corpus_records(
    n_papers: int,
    seed: int = 0,
    overlap: dict[str, float] | None = None,
    copy_rate: float = 0.8,
) -> list[dict]:
    if n_papers <= 0:
        raise ValueError(f"n_papers must be positive, got {n_papers}")
    rng = random.Random(seed)
    overlap = overlap or DEFAULT_OVERLAP
    return [generate_paper_record(rng, i, overlap, copy_rate) for i in range(n_papers)]


def generate_corpus(
    n_papers: int,
    seed: int = 0,
    overlap: dict[str, float] | None = None,
    copy_rate: float = 0.8,
) -> list[Paper]:
    return [paper_from_record(r) for r in generate_corpus_records(n_papers, seed, overlap, copy_rate)]


def write_corpus_jsonl(records: Iterable[dict], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, ensure_ascii=False))
            fh.write("\n")
