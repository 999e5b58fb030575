"""End-to-end glue: train-time assembly, the model registry layout, and
turning a method name into a summariser callable.

Registry directory layout:

    <registry>/<arch>.ckpt          one checkpoint per trained architecture
    <registry>/corpus_stats.json    background document frequencies
    <registry>/ensemble_<name>.json ensemble weight config {c, s1, s2}
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .baselines import BASELINES, BaselineConfig
from .corpus import Paper, body_sentences
from .dataset import LabeledInstance
from .embeddings import EmbeddingTable
from .evaluation import (
    SummaryResult,
    Summariser,
    generate_summary,
    oracle_summary,
    summary_from_selection,
)
from .features import CorpusStats
from .models import (
    ARCHITECTURES,
    ENSEMBLE_PRESETS,
    EnsembleConfig,
    InputAssembler,
    ensemble_probability,
    load_model,
    make_model,
    save_model,
    single_feature_ranker,
)
from .models import RANKABLE_FEATURES
from .rouge import DEFAULT_ROUGE, RougeConfig


class PipelineError(ValueError):
    pass


SEQUENCE_ARCHS = ("word2vec", "word2vecaf", "snet", "sfnet", "safnet")


def train_summariser(
    arch: str,
    papers: Sequence[Paper],
    train_instances: Sequence[LabeledInstance],
    table: EmbeddingTable | None = None,
    exclude_features: Sequence[str] = (),
    rouge_cfg: RougeConfig = DEFAULT_ROUGE,
    **model_params,
):
    """Fit the normalizer on the training instances, assemble inputs and
    train the named architecture.  Returns (model, assembler)."""
    if arch in SEQUENCE_ARCHS and table is None:
        raise PipelineError(f"architecture {arch!r} needs an embedding table")
    assembler = InputAssembler(
        papers, table=table, rouge_cfg=rouge_cfg, exclude_features=exclude_features
    )
    assembler.fit(train_instances)
    X = assembler.assemble(train_instances)
    y = assembler.labels(train_instances)
    model = make_model(arch, **model_params)
    model.fit(X, y)
    return model, assembler


def checkpoint_path(registry: Path, arch: str) -> Path:
    return Path(registry) / f"{arch}.ckpt"


def ensemble_config_path(registry: Path, name: str) -> Path:
    safe = name.replace("+", "_")
    return Path(registry) / f"ensemble_{safe}.json"


def corpus_stats_path(registry: Path) -> Path:
    return Path(registry) / "corpus_stats.json"


def save_trained(model, assembler: InputAssembler, registry: Path, rouge_beta: float) -> Path:
    registry = Path(registry)
    registry.mkdir(parents=True, exist_ok=True)
    preprocessing = assembler.normalizer_stats()
    preprocessing["rouge_beta"] = rouge_beta
    path = checkpoint_path(registry, model.arch)
    save_model(model, path, preprocessing=preprocessing)
    stats_file = corpus_stats_path(registry)
    with open(stats_file, "w", encoding="utf-8") as fh:
        json.dump(assembler.corpus_stats.to_json_dict(), fh)
    return path


def load_corpus_stats(registry: Path) -> CorpusStats | None:
    path = corpus_stats_path(Path(registry))
    if not path.exists():
        return None
    with open(path, encoding="utf-8") as fh:
        return CorpusStats.from_json_dict(json.load(fh))


@dataclass
class ModelBundle:
    """A reloaded model plus the assembler reproducing its training-time inputs."""

    name: str
    model: object
    assembler: InputAssembler

    def paper_scores(self, paper: Paper) -> dict[int, float]:
        body = body_sentences(paper)
        inputs = [self.assembler.model_input(b.tokens, b.category, paper) for b in body]
        scores = self.model.summary_scores(inputs)
        return {b.position: float(s) for b, s in zip(body, scores)}

    def summariser(self, rouge_cfg: RougeConfig) -> Summariser:
        def run(paper: Paper, budget: int) -> SummaryResult:
            scores = self.paper_scores(paper)
            return generate_summary(paper, lambda b: scores[b.position], budget, self.name, rouge_cfg)

        return run


def load_bundle(
    registry: Path,
    arch: str,
    papers: Sequence[Paper],
    table: EmbeddingTable | None = None,
) -> ModelBundle:
    path = checkpoint_path(Path(registry), arch)
    if not path.exists():
        raise PipelineError(f"no checkpoint for {arch!r} in {registry} (expected {path.name})")
    model, meta = load_model(path)
    pre = meta.get("preprocessing", {})
    if arch in SEQUENCE_ARCHS and table is None:
        raise PipelineError(f"architecture {arch!r} needs an embedding table at prediction time")
    assembler = InputAssembler(
        papers,
        table=table,
        corpus_stats=load_corpus_stats(registry),
        rouge_cfg=RougeConfig(beta=float(pre.get("rouge_beta", 1.0))),
        exclude_features=tuple(pre.get("exclude_features", ())),
    )
    assembler.set_normalizer_stats(pre["mean"], pre["std"])
    return ModelBundle(arch, model, assembler)


def _ensemble_summariser(
    name: str,
    config: EnsembleConfig,
    registry: Path,
    papers: Sequence[Paper],
    table: EmbeddingTable | None,
    rouge_cfg: RougeConfig,
) -> Summariser:
    bundle1 = load_bundle(registry, config.s1_model, papers, table)
    bundle2 = load_bundle(registry, config.s2_model, papers, table)

    def run(paper: Paper, budget: int) -> SummaryResult:
        s1 = bundle1.paper_scores(paper)
        s2 = bundle2.paper_scores(paper)
        return generate_summary(
            paper,
            lambda b: ensemble_probability(s1[b.position], s2[b.position], config.c),
            budget,
            name,
            rouge_cfg,
        )

    return run


def valid_method_names() -> list[str]:
    names = ["oracle", *ARCHITECTURES, *sorted(BASELINES)]
    names += [f"ensemble:{n}" for n in ENSEMBLE_PRESETS]
    names += [f"feature:{n}" for n in RANKABLE_FEATURES]
    return names


def make_summariser(
    method: str,
    papers: Sequence[Paper],
    registry: Path | None = None,
    table: EmbeddingTable | None = None,
    rouge_cfg: RougeConfig = DEFAULT_ROUGE,
    baseline_cfg: BaselineConfig = BaselineConfig(),
) -> Summariser:
    """Resolve a method name into a (paper, budget) -> SummaryResult callable.

    Feature rankers compute their statistics over the supplied papers;
    model and ensemble methods need a registry (and an embedding table for
    sequence architectures).
    """
    if method == "oracle":
        return lambda paper, budget: oracle_summary(paper, budget, rouge_cfg)
    if method in BASELINES:
        baseline = BASELINES[method]

        def run_baseline(paper: Paper, budget: int) -> SummaryResult:
            selected = baseline(paper, budget, baseline_cfg)
            return summary_from_selection(paper, selected, method, budget, rouge_cfg)

        return run_baseline
    if method.startswith("feature:"):
        feature_name = method.split(":", 1)[1]
        ranker = single_feature_ranker(feature_name)
        assembler = InputAssembler(papers, rouge_cfg=rouge_cfg)

        def run_feature(paper: Paper, budget: int) -> SummaryResult:
            return generate_summary(
                paper,
                lambda b: ranker(assembler.sentence_features(b.tokens, b.category, paper)),
                budget,
                method,
                rouge_cfg,
            )

        return run_feature
    if method in ARCHITECTURES:
        if registry is None:
            raise PipelineError(f"method {method!r} needs --registry with a trained checkpoint")
        return load_bundle(registry, method, papers, table).summariser(rouge_cfg)
    if method.startswith("ensemble:"):
        if registry is None:
            raise PipelineError(f"method {method!r} needs --registry with trained checkpoints")
        name = method.split(":", 1)[1]
        config_file = ensemble_config_path(registry, name)
        if not config_file.exists():
            raise PipelineError(
                f"no ensemble config {config_file.name} in {registry}; run 'pubsum ensemble tune' first"
            )
        return _ensemble_summariser(method, EnsembleConfig.load(config_file), registry, papers, table, rouge_cfg)
    raise PipelineError(f"unknown method {method!r}; valid methods: {', '.join(valid_method_names())}")
