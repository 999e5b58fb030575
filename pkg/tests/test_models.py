import numpy as np
import pytest
from sklearn.base import clone

from pubsum.dataset import DatasetSpec, build_cspubsumext
from pubsum.embeddings import EmbeddingTable
from pubsum.features import SentenceFeatures
from pubsum.models import (
    ARCHITECTURES,
    EnsembleConfig,
    FNet,
    InputAssembler,
    InputValidationError,
    ModelInput,
    SAFNet,
    Word2VecAFNet,
    Word2VecNet,
    ensemble_probability,
    load_model,
    make_model,
    save_model,
    single_feature_ranker,
)

RNG = np.random.default_rng(123)


def random_input(embed_dim=6, feat_dim=5, seq_len=4, rng=RNG):
    return ModelInput(
        s=rng.normal(size=(seq_len, embed_dim)),
        a=rng.normal(size=embed_dim),
        f=rng.normal(size=feat_dim),
        w2v=rng.normal(size=embed_dim),
    )


def toy_dataset(n=40, feat_dim=5, embed_dim=6, seed=0):
    """Separable toy set: positives shifted up in every component."""
    rng = np.random.default_rng(seed)
    X, y = [], []
    for i in range(n):
        label = i % 2
        shift = 1.5 if label else -1.5
        X.append(
            ModelInput(
                s=rng.normal(loc=shift, size=(rng.integers(2, 6), embed_dim)),
                a=rng.normal(loc=shift, size=embed_dim),
                f=rng.normal(loc=shift, size=feat_dim),
                w2v=rng.normal(loc=shift, size=embed_dim),
            )
        )
        y.append(label)
    return X, y


SMALL_PARAMS = dict(max_epochs=25, batch_size=8, patience=25, seed=0, dev_fraction=0.1)


def small_model(arch):
    params = dict(SMALL_PARAMS)
    if arch in ("fnet", "word2vec", "word2vecaf"):
        params["hidden_size"] = 16
    else:
        params["lstm_hidden"] = 8
    if arch in ("sfnet", "safnet"):
        params["branch_size"] = 8
    return make_model(arch, **params)


class TestInputValidation:
    @pytest.mark.parametrize("arch", ARCHITECTURES)
    def test_missing_component_named_in_error(self, arch):
        model = small_model(arch)
        X, y = toy_dataset(8)
        missing = model.required_inputs[0]
        broken = [ModelInput(**{k: getattr(inp, k) for k in ("s", "a", "f", "w2v") if k != missing}) for inp in X]
        with pytest.raises(InputValidationError, match=arch):
            model.fit(broken, y)

    def test_word2vecaf_input_is_208_dimensional_at_paper_sizes(self):
        inp = ModelInput(w2v=np.zeros(100), a=np.zeros(100), f=np.zeros(8))
        model = Word2VecAFNet()
        assert len(model._vector(inp)) == 208

    def test_label_validation(self):
        X, _ = toy_dataset(6)
        with pytest.raises(InputValidationError):
            small_model("fnet").fit(X, [0, 1, 2, 0, 1, 0])


class TestArchitectures:
    def test_untrained_zeroed_output_layer_gives_half(self):
        model = small_model("fnet")
        model._build(np.random.default_rng(0), {"input_dim": 5})
        model.output_.weights.value[...] = 0.0
        model.output_.bias.value[...] = 0.0
        model.classes_ = np.array([0, 1])
        proba = model.predict_proba([random_input()])
        assert np.allclose(proba, 0.5)

    def test_fnet_learns_separable_features(self):
        X, y = toy_dataset(60)
        model = FNet(hidden_size=16, dropout_keep=1.0, max_epochs=80, patience=80, batch_size=8, seed=0).fit(X, y)
        planted_positives = [x for x, label in zip(X, y) if label == 1]
        scores = model.summary_scores(planted_positives)
        assert np.all(scores > 0.9)

    @pytest.mark.parametrize("arch", ARCHITECTURES)
    def test_fit_predict_all_architectures(self, arch):
        X, y = toy_dataset(32)
        model = small_model(arch).fit(X, y)
        proba = model.predict_proba(X)
        assert proba.shape == (32, 2)
        assert np.allclose(proba.sum(axis=1), 1.0, atol=1e-12)
        assert np.all((proba >= 0) & (proba <= 1))
        accuracy = np.mean(model.predict(X) == np.array(y))
        assert accuracy > 0.8, f"{arch} failed to learn separable toy data: {accuracy}"

    def test_predict_tie_resolves_to_class_zero(self):
        model = small_model("fnet")
        model._build(np.random.default_rng(0), {"input_dim": 5})
        model.output_.weights.value[...] = 0.0
        model.output_.bias.value[...] = 0.0
        model.classes_ = np.array([0, 1])
        assert model.predict([random_input()]).tolist() == [0]

    def test_same_seed_fit_is_deterministic(self):
        X, y = toy_dataset(24)
        m1 = small_model("snet").fit(X, y)
        m2 = small_model("snet").fit(X, y)
        assert m1.history_.train_losses == m2.history_.train_losses
        assert np.array_equal(m1.predict_proba(X), m2.predict_proba(X))

    def test_sfnet_with_zeroed_feature_branch_ignores_features(self):
        X, y = toy_dataset(24)
        model = small_model("sfnet").fit(X, y)
        model.f_dense_.weights.value[...] = 0.0
        model.f_dense_.bias.value[...] = 0.0
        inp = X[0]
        changed = ModelInput(s=inp.s, a=inp.a, f=inp.f + 100.0, w2v=inp.w2v)
        assert np.array_equal(model.predict_proba([inp]), model.predict_proba([changed]))

    def test_sklearn_get_params_and_clone(self):
        model = SAFNet(lstm_hidden=8, branch_size=8, seed=3)
        params = model.get_params()
        assert params["lstm_hidden"] == 8 and params["seed"] == 3
        cloned = clone(model)
        assert cloned.get_params() == params

    def test_gradcheck_every_architecture(self):
        from test_neural import finite_difference_check
        from pubsum.neural import softmax_cross_entropy

        rng = np.random.default_rng(5)
        inp = random_input(rng=rng)
        dims_by_arch = {
            "fnet": {"input_dim": 5},
            "word2vec": {"input_dim": 6},
            "word2vecaf": {"input_dim": 17},
            "snet": {"embed_dim": 6},
            "sfnet": {"embed_dim": 6, "feature_dim": 5},
            "safnet": {"embed_dim": 6, "abstract_dim": 6, "feature_dim": 5},
        }
        for arch in ARCHITECTURES:
            model = small_model(arch)
            model._build(np.random.default_rng(1), dims_by_arch[arch])

            def loss_fn():
                logits = model.forward(inp, train=False, rng=None)
                loss, dlogits = softmax_cross_entropy(logits, 1)
                model.backward(dlogits)
                return loss

            finite_difference_check(model.parameters(), loss_fn)


class TestPersistence:
    @pytest.mark.parametrize("arch", ["fnet", "safnet"])
    def test_checkpoint_round_trip_bit_identical(self, tmp_path, arch):
        X, y = toy_dataset(24)
        model = small_model(arch).fit(X, y)
        before = model.predict_proba(X)
        path = tmp_path / f"{arch}.ckpt"
        save_model(model, path, preprocessing={"mean": [0] * 5, "std": [1] * 5})
        loaded, meta = load_model(path)
        assert meta["arch"] == arch
        assert meta["preprocessing"]["mean"] == [0] * 5
        after = loaded.predict_proba(X)
        assert np.array_equal(before, after)

    def test_loaded_params_match_original_class(self, tmp_path):
        X, y = toy_dataset(16)
        model = small_model("word2vec").fit(X, y)
        save_model(model, tmp_path / "m.ckpt")
        loaded, _ = load_model(tmp_path / "m.ckpt")
        assert isinstance(loaded, Word2VecNet)
        assert loaded.get_params() == model.get_params()


class TestEnsemble:
    def test_c_zero_is_unweighted_mean(self):
        assert ensemble_probability(0.3, 0.7, 0.0) == pytest.approx(0.5, abs=1e-15)

    def test_endpoints_select_single_model(self):
        assert ensemble_probability(0.3, 0.7, 1.0) == pytest.approx(0.7, abs=1e-15)
        assert ensemble_probability(0.3, 0.7, -1.0) == pytest.approx(0.3, abs=1e-15)

    def test_hand_computed(self):
        assert ensemble_probability(0.2, 0.8, 0.5) == pytest.approx(0.65, abs=1e-15)

    def test_out_of_range_c_rejected(self):
        with pytest.raises(ValueError):
            ensemble_probability(0.5, 0.5, 1.5)

    def test_non_probability_inputs_rejected(self):
        with pytest.raises(ValueError):
            ensemble_probability(1.2, 0.5, 0.0)

    def test_linearity(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            p1, p2, q1, q2 = rng.random(4)
            c = rng.uniform(-1, 1)
            left = ensemble_probability((p1 + q1) / 2, (p2 + q2) / 2, c)
            right = (ensemble_probability(p1, p2, c) + ensemble_probability(q1, q2, c)) / 2
            assert left == pytest.approx(right, abs=1e-12)

    def test_monotone_in_c_iff_p2_greater(self):
        grid = np.linspace(-1, 1, 21)
        rising = [ensemble_probability(0.2, 0.9, c) for c in grid]
        falling = [ensemble_probability(0.9, 0.2, c) for c in grid]
        assert all(b > a for a, b in zip(rising, rising[1:]))
        assert all(b < a for a, b in zip(falling, falling[1:]))

    def test_output_stays_in_unit_interval(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            p = ensemble_probability(rng.random(), rng.random(), rng.uniform(-1, 1))
            assert 0.0 <= p <= 1.0

    def test_config_round_trip_and_validation(self, tmp_path):
        config = EnsembleConfig(c=0.35, s1_model="safnet", s2_model="fnet")
        path = tmp_path / "ens.json"
        config.save(path)
        assert EnsembleConfig.load(path) == config
        with pytest.raises(ValueError):
            EnsembleConfig(c=2.0, s1_model="a", s2_model="b")


class TestSingleFeatureRanker:
    def _features(self, abstract_rouge=0.0, title=0):
        return SentenceFeatures(
            abstract_rouge=abstract_rouge, location=2, numeric_count=0, title_score=title,
            keyphrase_score=0, tf_idf=0.1, doc_tf_idf=0.2, sentence_length=9,
        )

    def test_extracts_named_feature(self):
        ranker = single_feature_ranker("abstract_rouge")
        assert ranker(self._features(abstract_rouge=0.42)) == pytest.approx(0.42)

    def test_excluded_features_rejected_with_rule(self):
        for name in ("sentence_length", "numeric_count", "location"):
            with pytest.raises(ValueError, match="too coarse"):
                single_feature_ranker(name)

    def test_unknown_feature_rejected(self):
        with pytest.raises(ValueError, match="unknown"):
            single_feature_ranker("wordiness")

    def test_ranking_matches_independent_sort(self):
        rng = np.random.default_rng(2)
        values = rng.random(12)
        feats = [self._features(abstract_rouge=v) for v in values]
        ranker = single_feature_ranker("abstract_rouge")
        ranked = sorted(range(12), key=lambda i: -ranker(feats[i]))
        assert ranked == list(np.argsort(-values, kind="stable"))


class TestInputAssembler:
    def test_assembled_components_and_dims(self, small_corpus):
        papers = small_corpus
        train, _ = build_cspubsumext(papers[:4], DatasetSpec(seed=0))
        vocab = {}
        rng = np.random.default_rng(0)
        for p in papers:
            for s in p.highlights + p.abstract:
                for t in s.tokens:
                    vocab.setdefault(t, len(vocab))
        table = EmbeddingTable(vocab, rng.normal(size=(len(vocab), 12)).astype(np.float32))
        assembler = InputAssembler(papers[:4], table=table)
        assembler.fit(train)
        X = assembler.assemble(train[:5])
        for inp in X:
            assert inp.f.shape == (8,)
            assert inp.a.shape == (12,)
            assert inp.w2v.shape == (12,)
            assert inp.s.ndim == 2 and inp.s.shape[1] == 12 and inp.s.shape[0] >= 1

    def test_exclude_features_shrinks_vector(self, small_corpus):
        papers = small_corpus[:3]
        train, _ = build_cspubsumext(papers, DatasetSpec(seed=0))
        assembler = InputAssembler(papers, exclude_features=("abstract_rouge", "location"))
        assembler.fit(train)
        X = assembler.assemble(train[:3])
        assert all(inp.f.shape == (6,) for inp in X)

    def test_unknown_paper_id_rejected(self, small_corpus):
        papers = small_corpus[:2]
        train, _ = build_cspubsumext(papers, DatasetSpec(seed=0))
        assembler = InputAssembler(papers[:1])
        foreign = [i for i in train if i.paper_id == papers[1].id]
        with pytest.raises(InputValidationError, match="unknown paper"):
            assembler.raw_feature_matrix(foreign[:1])

    def test_unknown_exclude_name_rejected(self, small_corpus):
        with pytest.raises(ValueError, match="unknown feature"):
            InputAssembler(small_corpus[:1], exclude_features=("bogus",))
