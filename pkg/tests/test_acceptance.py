"""Acceptance suite: desk-scale quantitative checks on the synthetic corpus.

Each criterion runs at its stated tolerance and prints one PASS/FAIL line
(visible with `pytest tests/test_acceptance.py -s`).  The heavy learning
artifacts (datasets, embeddings, trained models) are built once per module
and shared across criteria.
"""

import itertools
import random
import time
from contextlib import contextmanager
from dataclasses import dataclass, field

import numpy as np
import pytest

from pubsum.corpus import body_sentences, load_corpus, save_corpus
from pubsum.dataset import DatasetSpec, build_cspubsum, build_cspubsumext, save_instances
from pubsum.embeddings import EmbeddingTable, SkipGramConfig, corpus_token_stream, train_skipgram
from pubsum.evaluation import (
    evaluate_accuracy,
    evaluate_oracle,
    evaluate_rouge,
    generate_summary,
    pearson_r,
    tune_ensemble_weight,
    unpaired_t_test,
)
from pubsum.models import (
    FNet,
    InputAssembler,
    ModelInput,
    SAFNet,
    SNet,
    ensemble_probability,
    load_model,
    make_model,
    save_model,
)
from pubsum.neural import softmax_cross_entropy
from pubsum.pipeline import make_summariser
from pubsum.rouge import lcs_length, rouge_l

from test_neural import finite_difference_check
from test_rouge import brute_force_lcs


@contextmanager
def criterion(number: int, name: str):
    try:
        yield
    except BaseException:
        print(f"\nACCEPTANCE {number}: FAIL - {name}")
        raise
    print(f"\nACCEPTANCE {number}: PASS - {name}")


# --- shared heavy artifacts -----------------------------------------------------


@dataclass
class LearningArtifacts:
    papers: list
    train_papers: list
    val_papers: list
    test_papers: list
    ext_train: list
    ext_test: list
    base_instances: list
    table: EmbeddingTable
    assembler: InputAssembler
    X_train: list
    y_train: np.ndarray
    X_test: list
    y_test: np.ndarray
    models: dict = field(default_factory=dict)
    build_seconds: float = 0.0


MODEL_PARAMS = dict(
    learning_rate=1e-3, batch_size=64, dev_fraction=0.05, seed=0,
)


@pytest.fixture(scope="module")
def artifacts(fixture_corpus):
    started = time.monotonic()
    papers = list(fixture_corpus)
    train_papers = papers[:32]
    val_papers = papers[32:40]
    test_papers = papers[40:]

    # The fixture plants exactly 10 summary-grade sentences per paper, so the
    # learning checks label at top-10; criterion 3 exercises the default 20.
    spec = DatasetSpec(seed=7, top_k_positives=10)
    ext_train, ext_test = build_cspubsumext(train_papers, spec)
    base_instances = build_cspubsum(train_papers, spec)

    table = train_skipgram(corpus_token_stream(train_papers), SkipGramConfig(seed=0))

    assembler = InputAssembler(train_papers, table=table)
    assembler.fit(ext_train)
    X_train = assembler.assemble(ext_train)
    y_train = assembler.labels(ext_train)
    X_test = assembler.assemble(ext_test)
    y_test = assembler.labels(ext_test)

    art = LearningArtifacts(
        papers, train_papers, val_papers, test_papers,
        ext_train, ext_test, base_instances, table, assembler,
        X_train, y_train, X_test, y_test,
    )
    art.models["fnet"] = FNet(max_epochs=60, patience=8, **MODEL_PARAMS).fit(X_train, y_train)
    art.models["snet"] = SNet(max_epochs=12, patience=3, **MODEL_PARAMS).fit(X_train, y_train)
    art.models["safnet"] = SAFNet(max_epochs=12, patience=3, **MODEL_PARAMS).fit(X_train, y_train)
    art.build_seconds = time.monotonic() - started
    return art


def model_scorer_factory(model, assembler):
    def for_paper(paper):
        body = body_sentences(paper)
        inputs = [assembler.model_input(b.tokens, b.category, paper) for b in body]
        scores = model.summary_scores(inputs)
        lookup = {b.position: float(s) for b, s in zip(body, scores)}
        return lambda b: lookup[b.position]

    return for_paper


def model_summariser(model, assembler, name):
    factory = model_scorer_factory(model, assembler)

    def run(paper, budget):
        return generate_summary(paper, factory(paper), budget, name)

    return run


# --- criterion 1: ROUGE-L oracle equivalence ---------------------------------------


def test_criterion_1_rouge_oracle_equivalence():
    with criterion(1, "ROUGE-L equals exhaustive-subsequence oracle on 1000 cases"):
        started = time.monotonic()
        rng = random.Random(1234)
        alphabet = ["a", "b", "c", "d", "e", "f"]
        for _ in range(1000):
            a = [rng.choice(alphabet) for _ in range(rng.randint(0, 12))]
            b = [rng.choice(alphabet) for _ in range(rng.randint(0, 12))]
            expected = brute_force_lcs(a, b)
            lcs = lcs_length(a, b)
            assert lcs == expected
            score = rouge_l(a, b)
            if not a or not b or lcs == 0:
                assert score.f_score == 0.0
            else:
                p = lcs / len(a)
                r = lcs / len(b)
                assert abs(score.precision - p) < 1e-12
                assert abs(score.recall - r) < 1e-12
                assert abs(score.f_score - 2 * p * r / (p + r)) < 1e-12
        elapsed = time.monotonic() - started
        assert elapsed < 10.0, f"criterion 1 took {elapsed:.1f}s (limit 10s)"


# --- criterion 2: gradient verification ----------------------------------------------


def test_criterion_2_gradient_verification():
    with criterion(2, "every layer and architecture matches finite differences"):
        started = time.monotonic()
        from pubsum.neural import Dense, Relu

        rng = np.random.default_rng(42)

        # dense alone
        dense = Dense("d", 5, 3, rng)
        x = rng.normal(size=5)

        def dense_loss():
            logits = dense.forward(x)
            loss, dlogits = softmax_cross_entropy(logits[:2], 0)
            grad = np.zeros(3)
            grad[:2] = dlogits
            dense.backward(grad)
            return loss

        finite_difference_check(dense.parameters(), dense_loss)

        # dense -> relu -> dense path (dropout off)
        d1, relu, d2 = Dense("d1", 6, 5, rng), Relu(), Dense("d2", 5, 2, rng)
        x2 = rng.normal(size=6)

        def relu_path_loss():
            logits = d2.forward(relu.forward(d1.forward(x2)))
            loss, dlogits = softmax_cross_entropy(logits, 1)
            d1.backward(relu.backward(d2.backward(dlogits)))
            return loss

        finite_difference_check(d1.parameters() + d2.parameters(), relu_path_loss)

        # softmax cross-entropy gradient w.r.t. logits
        logits = rng.normal(size=2)
        _, analytic = softmax_cross_entropy(logits, 1)
        eps = 1e-4
        for j in range(2):
            bump = logits.copy()
            bump[j] += eps
            lp, _ = softmax_cross_entropy(bump, 1)
            bump[j] -= 2 * eps
            lm, _ = softmax_cross_entropy(bump, 1)
            numeric = (lp - lm) / (2 * eps)
            assert abs(numeric - analytic[j]) / max(abs(numeric), 1e-8) < 1e-4

        # LSTM cell
        from pubsum.neural import Dense as DenseHead, LstmCell

        cell = LstmCell("c", 4, 3, rng)
        head = DenseHead("h", 3, 2, rng)
        xs = rng.normal(size=(7, 4))

        def lstm_loss():
            loss, dlogits = softmax_cross_entropy(head.forward(cell.forward(xs)), 0)
            cell.backward(head.backward(dlogits))
            return loss

        finite_difference_check(cell.parameters() + head.parameters(), lstm_loss)

        # the four named architectures at reduced dims (dropout off in eval mode)
        dims = {
            "fnet": {"input_dim": 4},
            "snet": {"embed_dim": 5},
            "sfnet": {"embed_dim": 5, "feature_dim": 4},
            "safnet": {"embed_dim": 5, "abstract_dim": 5, "feature_dim": 4},
        }
        params = dict(max_epochs=1, seed=0)
        inp = ModelInput(
            s=rng.normal(size=(5, 5)), a=rng.normal(size=5), f=rng.normal(size=4), w2v=rng.normal(size=5)
        )
        for arch, arch_dims in dims.items():
            extra = {"hidden_size": 6} if arch == "fnet" else {"lstm_hidden": 4}
            if arch in ("sfnet", "safnet"):
                extra["branch_size"] = 5
            model = make_model(arch, **params, **extra)
            model._build(np.random.default_rng(3), arch_dims)

            def arch_loss():
                logits = model.forward(inp, train=False, rng=None)
                loss, dlogits = softmax_cross_entropy(logits, 1)
                model.backward(dlogits)
                return loss

            finite_difference_check(model.parameters(), arch_loss)

        elapsed = time.monotonic() - started
        assert elapsed < 60.0, f"criterion 2 took {elapsed:.1f}s (limit 60s)"


# --- criterion 3: dataset invariants ---------------------------------------------------


def test_criterion_3_dataset_invariants(fixture_corpus, tmp_path):
    with criterion(3, "dataset invariants hold on the 50-paper fixture"):
        from collections import Counter, defaultdict

        from pubsum.corpus import LocationCategory
        from pubsum.rouge import rouge_l_multi

        papers = fixture_corpus
        spec = DatasetSpec(seed=7)
        train, test = build_cspubsumext(papers, spec)
        instances = train + test

        per_paper = defaultdict(Counter)
        for inst in instances:
            per_paper[inst.paper_id][inst.label] += 1
        assert set(per_paper) == {p.id for p in papers}
        for paper_id, counts in per_paper.items():
            assert counts[0] == counts[1] > 0, paper_id

        abstract_texts = {s.raw_text for p in papers for s in p.abstract}
        assert all(i.sentence.raw_text not in abstract_texts for i in instances)
        assert all(i.location != LocationCategory.ABSTRACT for i in instances)

        groups = defaultdict(lambda: {"pos": [], "neg": []})
        for i in instances:
            if i.label == 1 and i.location != LocationCategory.HIGHLIGHT:
                groups[i.paper_id]["pos"].append(i.rouge_vs_highlights)
            elif i.label == 0:
                groups[i.paper_id]["neg"].append(i.rouge_vs_highlights)
        for paper_id, g in groups.items():
            assert min(g["pos"]) >= max(g["neg"]), paper_id

        # top-20 selection equals an independent rescoring + sort
        by_paper_positives = defaultdict(set)
        for i in instances:
            if i.label == 1 and i.location != LocationCategory.HIGHLIGHT:
                by_paper_positives[i.paper_id].add(i.sentence.raw_text)
        for paper in papers:
            refs = [h.tokens for h in paper.highlights]
            rescored = sorted(
                ((rouge_l_multi(b.tokens, refs).f_score, b.position, b.sentence.raw_text)
                 for b in body_sentences(paper)),
                key=lambda t: (-t[0], t[1]),
            )
            expected = {text for _, _, text in rescored[: spec.top_k_positives]}
            assert by_paper_positives[paper.id] == expected, paper.id

        # byte-exact determinism
        again_train, again_test = build_cspubsumext(papers, spec)
        for name, first, second in (("train", train, again_train), ("test", test, again_test)):
            p1 = tmp_path / f"{name}_1.jsonl"
            p2 = tmp_path / f"{name}_2.jsonl"
            save_instances(first, p1)
            save_instances(second, p2)
            assert p1.read_bytes() == p2.read_bytes()


# --- criterion 4: fixture learning check -----------------------------------------------


def test_criterion_4_fixture_learning(artifacts):
    with criterion(4, "FNet/SNet reach 90% accuracy; SAF+F ensemble leads at k=10"):
        started = time.monotonic()
        art = artifacts
        budget = 10

        acc_fnet = evaluate_accuracy(art.models["fnet"], art.X_test, art.y_test)
        acc_snet = evaluate_accuracy(art.models["snet"], art.X_test, art.y_test)
        assert acc_fnet >= 0.90, f"FNet accuracy {acc_fnet:.3f} below 0.90"
        assert acc_snet >= 0.90, f"SNet accuracy {acc_snet:.3f} below 0.90"

        saf_factory = model_scorer_factory(art.models["safnet"], art.assembler)
        fnet_factory = model_scorer_factory(art.models["fnet"], art.assembler)
        c = tune_ensemble_weight(art.val_papers, saf_factory, fnet_factory, budget)

        def ensemble_run(paper, k):
            s1 = saf_factory(paper)
            s2 = fnet_factory(paper)
            return generate_summary(
                paper, lambda b: ensemble_probability(s1(b), s2(b), c), k, "saf+f"
            )

        ens_eval = evaluate_rouge(ensemble_run, art.test_papers, budget, "saf+f")
        saf_eval = evaluate_rouge(
            model_summariser(art.models["safnet"], art.assembler, "safnet"),
            art.test_papers, budget, "safnet",
        )
        fnet_eval = evaluate_rouge(
            model_summariser(art.models["fnet"], art.assembler, "fnet"),
            art.test_papers, budget, "fnet",
        )
        textrank_eval = evaluate_rouge(
            make_summariser("textrank", art.test_papers), art.test_papers, budget, "textrank"
        )

        assert ens_eval.mean_f >= saf_eval.mean_f - 1e-12, (
            f"ensemble {ens_eval.mean_f:.4f} < SAFNet {saf_eval.mean_f:.4f}"
        )
        assert ens_eval.mean_f >= fnet_eval.mean_f - 1e-12, (
            f"ensemble {ens_eval.mean_f:.4f} < FNet {fnet_eval.mean_f:.4f}"
        )
        assert ens_eval.mean_f >= textrank_eval.mean_f, (
            f"ensemble {ens_eval.mean_f:.4f} < TextRank {textrank_eval.mean_f:.4f}"
        )

        total = art.build_seconds + (time.monotonic() - started)
        assert total < 900.0, f"criterion 4 took {total:.0f}s including artifact build (limit 900s)"


# --- criterion 5: ablation direction checks ----------------------------------------------


def test_criterion_5_ablation_directions(artifacts):
    with criterion(5, "feature and data ablations do not improve FNet"):
        art = artifacts
        budget = 10
        fnet_params = dict(max_epochs=60, patience=8, **MODEL_PARAMS)

        def train_fnet(instances, exclude):
            assembler = InputAssembler(art.train_papers, exclude_features=exclude)
            assembler.fit(instances)
            model = FNet(**fnet_params).fit(assembler.assemble(instances), assembler.labels(instances))
            return model, assembler

        def mean_f(model, assembler):
            evaluation = evaluate_rouge(
                model_summariser(model, assembler, "fnet"), art.test_papers, budget, "fnet"
            )
            return evaluation.mean_f

        # ablation 1: removing the abstract-overlap feature must not help
        with_ar = mean_f(art.models["fnet"], art.assembler)
        no_ar_model, no_ar_asm = train_fnet(art.ext_train, ("abstract_rouge",))
        without_ar = mean_f(no_ar_model, no_ar_asm)
        assert with_ar >= without_ar, f"without AbstractROUGE {without_ar:.4f} > with {with_ar:.4f}"

        # ablation 2: the unextended dataset must not beat the extended one
        # (location feature removed from both sides for comparability).
        ext_model, ext_asm = train_fnet(art.ext_train, ("location",))
        unext_model, unext_asm = train_fnet(art.base_instances, ("location",))
        ext_f = mean_f(ext_model, ext_asm)
        unext_f = mean_f(unext_model, unext_asm)
        assert ext_f >= unext_f, f"unextended {unext_f:.4f} > extended {ext_f:.4f}"


# --- criterion 6: ensemble formula -------------------------------------------------------


def test_criterion_6_ensemble_formula():
    with criterion(6, "ensemble equals (S1(1-C)+S2(1+C))/2 exactly"):
        grid = [i / 4 for i in range(5)]
        cs = [i / 10 for i in range(-10, 11)]
        for p1, p2, c in itertools.product(grid, grid, cs):
            expected = (p1 * (1.0 - c) + p2 * (1.0 + c)) / 2.0
            assert ensemble_probability(p1, p2, c) == expected
        for p1, p2 in itertools.product(grid, grid):
            assert ensemble_probability(p1, p2, 0.0) == (p1 + p2) / 2.0
            assert ensemble_probability(p1, p2, 1.0) == p2
            assert ensemble_probability(p1, p2, -1.0) == p1


# --- criterion 7: statistics -------------------------------------------------------------


def test_criterion_7_statistics():
    with criterion(7, "pearson and t-test match hand-computed cases to 1e-9"):
        x = [1.0, 2.0, 3.0, 4.0, 5.0]
        assert abs(pearson_r(x, [2 * v + 1 for v in x]) - 1.0) < 1e-9
        # by hand: dx=[-2,-1,0,1,2], dy=[-1,-2,1,0,2] -> r = 8/10
        assert abs(pearson_r([1, 2, 3, 4, 5], [2, 1, 4, 3, 5]) - 0.8) < 1e-9
        # by hand: t = -sqrt(3), df = 6; p frozen from an independent
        # incomplete-beta evaluation (mpmath, 30 digits)
        p = unpaired_t_test([1, 2, 3, 4], [2, 4, 6, 8])
        assert abs(p - 0.13397459621556135) < 1e-9
        assert unpaired_t_test([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]) == 1.0


# --- criterion 8: oracle dominance ----------------------------------------------------------


def test_criterion_8_oracle_dominance(artifacts):
    with criterion(8, "greedy oracle is never below any method at equal k"):
        art = artifacts
        budget = 10
        summarisers = {
            "fnet": model_summariser(art.models["fnet"], art.assembler, "fnet"),
            "snet": model_summariser(art.models["snet"], art.assembler, "snet"),
            "safnet": model_summariser(art.models["safnet"], art.assembler, "safnet"),
        }
        for method in ("textrank", "lexrank", "sumbasic", "klsum", "lsa",
                       "feature:abstract_rouge", "feature:title_score"):
            summarisers[method] = make_summariser(method, art.papers)

        evaluations = [
            evaluate_rouge(run, art.papers, budget, name) for name, run in summarisers.items()
        ]
        oracle_eval = evaluate_oracle(art.papers, budget, method_evaluations=evaluations)
        oracle_by_paper = {r.paper_id: r.rouge.f_score for r in oracle_eval.results}
        for evaluation in evaluations:
            for result in evaluation.results:
                assert oracle_by_paper[result.paper_id] >= result.rouge.f_score - 1e-15, (
                    f"{evaluation.method} beats oracle on {result.paper_id}"
                )


# --- criterion 9: round-trips ------------------------------------------------------------------


def test_criterion_9_round_trips(artifacts, tmp_path):
    with criterion(9, "corpus, embedding and checkpoint round-trips are lossless"):
        art = artifacts

        corpus_path = tmp_path / "corpus.jsonl"
        save_corpus(art.papers, corpus_path)
        assert load_corpus(corpus_path) == art.papers

        table_path = tmp_path / "table.vec"
        art.table.save(table_path)
        reloaded = EmbeddingTable.load(table_path)
        assert reloaded.vocabulary == art.table.vocabulary
        assert np.array_equal(reloaded.vectors, art.table.vectors)
        resaved = tmp_path / "table2.vec"
        reloaded.save(resaved)
        assert table_path.read_bytes() == resaved.read_bytes()

        sample = art.X_test[:25]
        for arch in ("fnet", "snet", "safnet"):
            model = art.models[arch]
            before = model.predict_proba(sample)
            path = tmp_path / f"{arch}.ckpt"
            save_model(model, path, preprocessing=art.assembler.normalizer_stats())
            loaded, meta = load_model(path)
            assert meta["arch"] == arch
            after = loaded.predict_proba(sample)
            assert np.array_equal(before, after), f"{arch} predictions changed after reload"
