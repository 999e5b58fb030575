"""Batch command-line surface for the whole pipeline.

Every command validates its inputs before producing output, exits non-zero
with a single-line error on failure, and writes a JSON run manifest beside
its outputs.  Configuration precedence is flags > --config file > defaults;
config keys are the option names with dashes replaced by underscores,
nested by command (e.g. {"dataset": {"build": {"top_k": 25}}}).
"""

from __future__ import annotations

import json
import time
from pathlib import Path

import click

from . import __version__
from .corpus import CorpusError, load_corpus
from .dataset import (
    DatasetError,
    DatasetSpec,
    build_cspubsum,
    build_cspubsumext,
    load_instances,
    save_instances,
)
from .embeddings import EmbeddingError, EmbeddingTable, SkipGramConfig, corpus_token_stream, train_skipgram
from .evaluation import (
    build_report,
    copy_paste_analysis,
    evaluate_accuracy,
    evaluate_oracle,
    evaluate_rouge,
    section_rouge_analysis,
    tune_ensemble_weight,
    write_copy_paste_csv,
    write_per_paper_csv,
    write_section_rouge_csv,
)
from .fixtures import DEFAULT_OVERLAP, generate_corpus_records, write_corpus_jsonl
from .models import ARCHITECTURES, ENSEMBLE_PRESETS, EnsembleConfig, InputValidationError
from .pipeline import (
    PipelineError,
    ensemble_config_path,
    load_bundle,
    make_summariser,
    save_trained,
    train_summariser,
    valid_method_names,
)
from .rouge import RougeConfig

_ERRORS = (CorpusError, DatasetError, EmbeddingError, PipelineError, InputValidationError, ValueError, OSError)


def _fail(exc: Exception) -> None:
    raise click.ClickException(" ".join(str(exc).split()))


def _normalize_keys(mapping):
    if not isinstance(mapping, dict):
        return mapping
    return {key.replace("-", "_"): _normalize_keys(value) for key, value in mapping.items()}


def _write_manifest(
    directory: Path,
    command: str,
    config: dict,
    inputs: dict,
    outputs: dict,
    seed: int | None,
    started: float,
    name: str = "manifest.json",
) -> None:
    manifest = {
        "command": command,
        "config": config,
        "seed": seed,
        "inputs": inputs,
        "outputs": outputs,
        "tool_version": __version__,
        "wall_clock_seconds": round(time.monotonic() - started, 3),
    }
    directory.mkdir(parents=True, exist_ok=True)
    with open(directory / name, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


@click.group()
@click.version_option(__version__)
@click.option("--config", type=click.Path(exists=True, dir_okay=False), default=None,
              help="JSON file of per-command option defaults (flags still win).")
@click.pass_context
def main(ctx: click.Context, config: str | None) -> None:
    """Extractive summarisation pipeline for scientific-paper corpora."""
    if config:
        with open(config, encoding="utf-8") as fh:
            ctx.default_map = _normalize_keys(json.load(fh))


# --- fixtures ----------------------------------------------------------------


@main.group()
def fixtures() -> None:
    """Synthetic corpus fixtures."""


@fixtures.command("generate")
@click.option("--papers", type=int, required=True, help="Number of synthetic papers.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--copy-rate", type=float, default=0.8, show_default=True,
              help="Fraction of papers with verbatim highlight copies in the body.")
@click.option("--overlap", multiple=True, metavar="SECTION=WEIGHT",
              help="Per-section planted-summary weight (introduction, method, results, conclusion, other).")
def fixtures_generate(papers: int, seed: int, out: str, copy_rate: float, overlap: tuple[str, ...]) -> None:
    """Emit a synthetic corpus with planted summary signal."""
    started = time.monotonic()
    if papers <= 0:
        raise click.BadParameter("--papers must be positive")
    weights = dict(DEFAULT_OVERLAP)
    for item in overlap:
        if "=" not in item:
            raise click.BadParameter(f"--overlap expects SECTION=WEIGHT, got {item!r}")
        section, weight = item.split("=", 1)
        if section not in DEFAULT_OVERLAP:
            raise click.BadParameter(f"unknown section {section!r}; expected one of {', '.join(DEFAULT_OVERLAP)}")
        weights[section] = float(weight)
    try:
        records = generate_corpus_records(papers, seed, weights, copy_rate)
        write_corpus_jsonl(records, out)
    except _ERRORS as exc:
        _fail(exc)
    out_path = Path(out)
    _write_manifest(
        out_path.parent, "fixtures generate",
        {"papers": papers, "copy_rate": copy_rate, "overlap": weights},
        {}, {"corpus": out_path.name}, seed, started, name=f"{out_path.stem}.manifest.json",
    )
    click.echo(f"wrote {len(records)} papers to {out}")


# --- dataset -------------------------------------------------------------------


@main.group()
def dataset() -> None:
    """Labeled-instance dataset construction."""


@dataset.command("build")
@click.option("--corpus", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--variant", type=click.Choice(["cspubsum", "cspubsumext"]), required=True)
@click.option("--out-dir", type=click.Path(file_okay=False), required=True)
@click.option("--top-k", type=int, default=20, show_default=True, help="Body positives per paper (extended variant).")
@click.option("--neg-fraction", type=float, default=0.10, show_default=True,
              help="Bottom pool fraction for base-variant negatives.")
@click.option("--train-fraction", type=float, default=2.0 / 3.0, show_default=True,
              help="Per-paper train share of extended-variant instances.")
@click.option("--negative-shuffle", is_flag=True,
              help="Sample extended negatives from the bottom pool instead of taking it in order.")
@click.option("--rouge-beta", type=float, default=1.0, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True, help="Per-paper scoring processes.")
def dataset_build(corpus, variant, out_dir, top_k, neg_fraction, train_fraction,
                  negative_shuffle, rouge_beta, seed, jobs) -> None:
    """Score, label and serialize a dataset from a corpus."""
    started = time.monotonic()
    out = Path(out_dir)
    try:
        papers = load_corpus(corpus)
        spec = DatasetSpec(
            top_k_positives=top_k,
            negative_pool_fraction=neg_fraction,
            seed=seed,
            train_fraction_ext=train_fraction,
            negative_shuffle=negative_shuffle,
        )
        cfg = RougeConfig(beta=rouge_beta)
        out.mkdir(parents=True, exist_ok=True)
        if variant == "cspubsum":
            instances = build_cspubsum(papers, spec, cfg, jobs=jobs)
            save_instances(instances, out / "cspubsum.jsonl")
            outputs = {"instances": "cspubsum.jsonl"}
            counts = {"instances": len(instances)}
        else:
            train, test = build_cspubsumext(papers, spec, cfg, jobs=jobs)
            save_instances(train, out / "cspubsumext.train.jsonl")
            save_instances(test, out / "cspubsumext.test.jsonl")
            outputs = {"train": "cspubsumext.train.jsonl", "test": "cspubsumext.test.jsonl"}
            counts = {"train_instances": len(train), "test_instances": len(test)}
    except _ERRORS as exc:
        _fail(exc)
    _write_manifest(
        out, "dataset build",
        {"variant": variant, "top_k": top_k, "neg_fraction": neg_fraction,
         "train_fraction": train_fraction, "negative_shuffle": negative_shuffle,
         "rouge_beta": rouge_beta, "jobs": jobs, **counts},
        {"corpus": str(corpus)}, outputs, seed, started,
    )
    click.echo(json.dumps(counts))


# --- embeddings -------------------------------------------------------------------


@main.group()
def embeddings() -> None:
    """Skip-gram word embeddings."""


@embeddings.command("train")
@click.option("--corpus", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--dim", type=int, default=100, show_default=True)
@click.option("--min-count", type=int, default=5, show_default=True)
@click.option("--window", type=int, default=20, show_default=True)
@click.option("--downsample", type=float, default=1e-3, show_default=True)
@click.option("--negative", type=int, default=5, show_default=True)
@click.option("--epochs", type=int, default=5, show_default=True)
@click.option("--learning-rate", type=float, default=0.025, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--workers", type=int, default=1, show_default=True,
              help="Training threads; >1 is faster but not reproducible.")
def embeddings_train(corpus, out, dim, min_count, window, downsample, negative,
                     epochs, learning_rate, seed, workers) -> None:
    """Train skip-gram embeddings over every sentence of a corpus."""
    started = time.monotonic()
    try:
        papers = load_corpus(corpus)
        cfg = SkipGramConfig(
            dim=dim, min_count=min_count, window=window, downsample=downsample,
            negative_samples=negative, epochs=epochs, learning_rate=learning_rate,
            seed=seed, workers=workers,
        )
        table = train_skipgram(corpus_token_stream(papers), cfg)
        table.save(out)
    except _ERRORS as exc:
        _fail(exc)
    out_path = Path(out)
    _write_manifest(
        out_path.parent, "embeddings train",
        {"dim": dim, "min_count": min_count, "window": window, "downsample": downsample,
         "negative": negative, "epochs": epochs, "learning_rate": learning_rate,
         "workers": workers, "vocabulary": len(table)},
        {"corpus": str(corpus)}, {"table": out_path.name}, seed, started,
        name=f"{out_path.stem}.manifest.json",
    )
    click.echo(f"trained {len(table)} x {table.dim} embedding table -> {out}")


# --- model ---------------------------------------------------------------------------


@main.group()
def model() -> None:
    """Summariser model training."""


@model.command("train")
@click.option("--arch", type=click.Choice(list(ARCHITECTURES)), required=True)
@click.option("--corpus", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--train", type=click.Path(exists=True, dir_okay=False), required=True,
              help="Training instances (JSON Lines).")
@click.option("--out-dir", type=click.Path(file_okay=False), required=True,
              help="Model registry directory.")
@click.option("--embeddings", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--exclude-feature", multiple=True,
              help="Feature name to drop from the feature vector (repeatable).")
@click.option("--hidden-size", type=int, default=100, show_default=True)
@click.option("--lstm-hidden", type=int, default=128, show_default=True)
@click.option("--branch-size", type=int, default=100, show_default=True)
@click.option("--dropout-keep", type=float, default=0.5, show_default=True)
@click.option("--optimizer", type=click.Choice(["adam", "sgd"]), default="adam", show_default=True)
@click.option("--learning-rate", type=float, default=1e-3, show_default=True)
@click.option("--batch-size", type=int, default=64, show_default=True)
@click.option("--max-epochs", type=int, default=100, show_default=True)
@click.option("--patience", type=int, default=5, show_default=True)
@click.option("--rouge-beta", type=float, default=1.0, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def model_train(arch, corpus, train, out_dir, embeddings, exclude_feature,
                hidden_size, lstm_hidden, branch_size, dropout_keep, optimizer,
                learning_rate, batch_size, max_epochs, patience, rouge_beta, seed) -> None:
    """Train one architecture and store its checkpoint in the registry."""
    started = time.monotonic()
    try:
        papers = load_corpus(corpus)
        instances = load_instances(train)
        table = EmbeddingTable.load(embeddings) if embeddings else None
        params: dict = {
            "dropout_keep": dropout_keep, "optimizer": optimizer, "learning_rate": learning_rate,
            "batch_size": batch_size, "max_epochs": max_epochs, "patience": patience, "seed": seed,
        }
        if arch in ("fnet", "word2vec", "word2vecaf"):
            params["hidden_size"] = hidden_size
        if arch in ("snet", "sfnet", "safnet"):
            params["lstm_hidden"] = lstm_hidden
        if arch in ("sfnet", "safnet"):
            params["branch_size"] = branch_size
        trained, assembler = train_summariser(
            arch, papers, instances, table=table,
            exclude_features=exclude_feature, rouge_cfg=RougeConfig(beta=rouge_beta), **params,
        )
        path = save_trained(trained, assembler, Path(out_dir), rouge_beta)
    except _ERRORS as exc:
        _fail(exc)
    history = trained.history_
    _write_manifest(
        Path(out_dir), "model train",
        {"arch": arch, "exclude_features": list(exclude_feature), "rouge_beta": rouge_beta,
         "epochs_run": len(history.train_losses), "best_epoch": history.best_epoch,
         "best_dev_loss": history.dev_losses[history.best_epoch], **params},
        {"corpus": str(corpus), "train": str(train),
         "embeddings": str(embeddings) if embeddings else None},
        {"checkpoint": path.name}, seed, started, name=f"{arch}.manifest.json",
    )
    click.echo(f"trained {arch}: best dev loss {history.dev_losses[history.best_epoch]:.4f} "
               f"at epoch {history.best_epoch} -> {path}")


# --- ensemble ----------------------------------------------------------------------------


@main.group()
def ensemble() -> None:
    """Two-model weighted-average ensembles."""


@ensemble.command("tune")
@click.option("--name", type=click.Choice(sorted(ENSEMBLE_PRESETS)), required=True)
@click.option("--registry", type=click.Path(exists=True, file_okay=False), required=True)
@click.option("--corpus", type=click.Path(exists=True, dir_okay=False), required=True,
              help="Papers to tune the weight on (use a validation split).")
@click.option("--k", type=int, default=10, show_default=True)
@click.option("--embeddings", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--step", type=float, default=0.05, show_default=True)
@click.option("--rouge-beta", type=float, default=1.0, show_default=True)
@click.option("--tune-on-test", is_flag=True,
              help="Declare that the tuning corpus is the evaluation test set (parity mode, recorded in the manifest).")
def ensemble_tune(name, registry, corpus, k, embeddings, step, rouge_beta, tune_on_test) -> None:
    """Grid-search the ensemble weight c on a corpus and store the config."""
    started = time.monotonic()
    try:
        papers = load_corpus(corpus)
        table = EmbeddingTable.load(embeddings) if embeddings else None
        cfg = RougeConfig(beta=rouge_beta)
        s1_name, s2_name = ENSEMBLE_PRESETS[name]
        bundle1 = load_bundle(Path(registry), s1_name, papers, table)
        bundle2 = load_bundle(Path(registry), s2_name, papers, table)

        def scorer_for(bundle):
            def factory(paper):
                scores = bundle.paper_scores(paper)
                return lambda b: scores[b.position]

            return factory

        c = tune_ensemble_weight(papers, scorer_for(bundle1), scorer_for(bundle2), k, cfg, step)
        config = EnsembleConfig(c=c, s1_model=s1_name, s2_model=s2_name)
        out_path = ensemble_config_path(Path(registry), name)
        config.save(out_path)
    except _ERRORS as exc:
        _fail(exc)
    _write_manifest(
        Path(registry), "ensemble tune",
        {"name": name, "k": k, "step": step, "rouge_beta": rouge_beta,
         "tuned_on_test_set": tune_on_test, "c": c},
        {"corpus": str(corpus), "embeddings": str(embeddings) if embeddings else None},
        {"config": out_path.name}, None, started, name=f"ensemble_{name.replace('+', '_')}.manifest.json",
    )
    click.echo(f"tuned {name}: c={c:+.2f} -> {out_path}")


# --- summarise -------------------------------------------------------------------------------


def _validate_methods(methods) -> None:
    valid = valid_method_names()
    for m in methods:
        if m not in valid:
            raise click.BadParameter(f"unknown method {m!r}; valid: {', '.join(valid)}")


@main.command("summarise")
@click.option("--corpus", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--method", multiple=True, required=True, metavar="METHOD",
              help="Repeatable; run 'pubsum summarise --help' for the list of methods.")
@click.option("--k", type=int, default=10, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--registry", type=click.Path(exists=True, file_okay=False), default=None)
@click.option("--embeddings", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--rouge-beta", type=float, default=1.0, show_default=True)
def summarise(corpus, method, k, out, registry, embeddings, rouge_beta) -> None:
    """Generate budgeted summaries for every paper in a corpus.

    Methods: a trained architecture name, ensemble:<saf+f|s+f>, oracle, a
    baseline (sumbasic, klsum, textrank, lexrank, lsa), or feature:<name>.
    """
    started = time.monotonic()
    if k <= 0:
        raise click.BadParameter("--k must be positive")
    _validate_methods(method)
    try:
        papers = load_corpus(corpus)
        table = EmbeddingTable.load(embeddings) if embeddings else None
        cfg = RougeConfig(beta=rouge_beta)
        registry_path = Path(registry) if registry else None
        with open(out, "w", encoding="utf-8") as fh:
            for name in method:
                run = make_summariser(name, papers, registry_path, table, cfg)
                for paper in papers:
                    result = run(paper, k)
                    fh.write(json.dumps({
                        "paper_id": result.paper_id,
                        "method": name,
                        "k": k,
                        "rouge_l": {"precision": result.rouge.precision,
                                    "recall": result.rouge.recall,
                                    "f_score": result.rouge.f_score},
                        "sentences": [
                            {"position": b.position, "text": b.sentence.raw_text} for b in result.selected
                        ],
                    }, ensure_ascii=False))
                    fh.write("\n")
    except _ERRORS as exc:
        _fail(exc)
    out_path = Path(out)
    _write_manifest(
        out_path.parent, "summarise",
        {"method": list(method), "k": k, "rouge_beta": rouge_beta},
        {"corpus": str(corpus), "registry": registry,
         "embeddings": str(embeddings) if embeddings else None},
        {"summaries": out_path.name}, None, started, name=f"{out_path.stem}.manifest.json",
    )
    click.echo(f"wrote summaries for {len(method)} method(s) -> {out}")


# --- evaluate ------------------------------------------------------------------------------------


@main.command("evaluate")
@click.option("--corpus", type=click.Path(exists=True, dir_okay=False), required=True,
              help="Test papers for summary-quality evaluation.")
@click.option("--method", multiple=True, required=True, metavar="METHOD",
              help="Repeatable; same method names as summarise.")
@click.option("--k", type=int, default=10, show_default=True)
@click.option("--out-dir", type=click.Path(file_okay=False), required=True)
@click.option("--registry", type=click.Path(exists=True, file_okay=False), default=None)
@click.option("--embeddings", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--instances", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Labeled test instances for model accuracy.")
@click.option("--rouge-beta", type=float, default=1.0, show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True, help="Processes for the oracle computation.")
def evaluate(corpus, method, k, out_dir, registry, embeddings, instances, rouge_beta, jobs) -> None:
    """Evaluate methods with ROUGE-L against highlights, oracle-relative
    scores, optional accuracy, and pairwise significance tests."""
    started = time.monotonic()
    _validate_methods(method)
    try:
        papers = load_corpus(corpus)
        table = EmbeddingTable.load(embeddings) if embeddings else None
        cfg = RougeConfig(beta=rouge_beta)
        registry_path = Path(registry) if registry else None
        evaluations = []
        accuracies = {}
        for name in method:
            run = make_summariser(name, papers, registry_path, table, cfg)
            evaluations.append(evaluate_rouge(run, papers, k, name))
        if instances:
            test_instances = load_instances(instances)
            for name in method:
                if name in ARCHITECTURES:
                    bundle = load_bundle(registry_path, name, papers, table)
                    X = bundle.assembler.assemble(test_instances)
                    y = bundle.assembler.labels(test_instances)
                    accuracies[name] = evaluate_accuracy(bundle.model, X, y)
        oracle_eval = evaluate_oracle(papers, k, cfg, evaluations, jobs=jobs)
        report = build_report(evaluations, oracle_eval, k, rouge_beta, accuracies)
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "report.json", "w", encoding="utf-8") as fh:
            json.dump(report.to_json_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
        write_per_paper_csv(report, out / "per_paper.csv")
    except _ERRORS as exc:
        _fail(exc)
    _write_manifest(
        out, "evaluate",
        {"method": list(method), "k": k, "rouge_beta": rouge_beta, "jobs": jobs},
        {"corpus": str(corpus), "registry": registry,
         "embeddings": str(embeddings) if embeddings else None,
         "instances": str(instances) if instances else None},
        {"report": "report.json", "per_paper": "per_paper.csv"}, None, started,
    )
    click.echo(json.dumps({m.method: round(m.mean_f, 4) for m in report.methods}))


# --- analyse -----------------------------------------------------------------------------------------


@main.group()
def analyse() -> None:
    """Corpus analyses."""


@analyse.command("sections")
@click.option("--corpus", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--out-dir", type=click.Path(file_okay=False), required=True)
@click.option("--rouge-beta", type=float, default=1.0, show_default=True)
@click.option("--copy-threshold", type=float, default=None,
              help="Count near-copies at this ROUGE-L F threshold instead of exact matches.")
def analyse_sections(corpus, out_dir, rouge_beta, copy_threshold) -> None:
    """Per-section mean ROUGE-L against highlights, plus the copy/paste counts."""
    started = time.monotonic()
    try:
        papers = load_corpus(corpus)
        cfg = RougeConfig(beta=rouge_beta)
        section_stats = section_rouge_analysis(papers, cfg)
        copies = copy_paste_analysis(papers, cfg, copy_threshold)
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_section_rouge_csv(section_stats, out / "section_rouge.csv")
        write_copy_paste_csv(copies, out / "copy_paste.csv")
    except _ERRORS as exc:
        _fail(exc)
    _write_manifest(
        out, "analyse sections",
        {"rouge_beta": rouge_beta, "copy_threshold": copy_threshold, "copied_total": copies.total},
        {"corpus": str(corpus)},
        {"section_rouge": "section_rouge.csv", "copy_paste": "copy_paste.csv"}, None, started,
    )
    click.echo(f"analysed {len(papers)} papers; {copies.total} copied highlight(s)")


if __name__ == "__main__":
    main()
