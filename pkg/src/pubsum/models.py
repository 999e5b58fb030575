"""Trainable summariser architectures, ensembling, and single-feature rankers.

Each architecture consumes some combination of four inputs per sentence and
is named for what it takes: S (the token-vector sequence through a
bidirectional LSTM), A (the averaged abstract vector), F (the 8 normalized
features) and Word2Vec (the averaged sentence vector).  All end in a 2-class
softmax; the returned summary probability is the positive-class mass.

Models follow the scikit-learn estimator contract (fit / predict /
predict_proba / get_params) so they compose with the wider ecosystem, while
training runs on the package's own gradient-checked neural core.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.exceptions import NotFittedError

from .corpus import LocationCategory, Paper
from .dataset import LabeledInstance
from .embeddings import EmbeddingTable, abstract_vector, sentence_vector
from .features import (
    FEATURE_NAMES,
    CorpusStats,
    FeatureNormalizer,
    PaperStats,
    SentenceFeatures,
    extract_features,
)
from .neural import (
    BiLstm,
    Dense,
    Dropout,
    Relu,
    TrainConfig,
    load_checkpoint,
    save_checkpoint,
    softmax,
    train,
)
from .rouge import DEFAULT_ROUGE, RougeConfig
from .stopwords import default_stopwords

ARCHITECTURES = ("fnet", "word2vec", "word2vecaf", "snet", "sfnet", "safnet")

_INPUT_DESCRIPTIONS = {
    "s": "token-vector sequence (S)",
    "a": "abstract vector (A)",
    "f": "feature vector (F)",
    "w2v": "averaged sentence vector (Word2Vec)",
}


class InputValidationError(ValueError):
    pass


@dataclass(frozen=True)
class ModelInput:
    """Per-sentence inputs; architectures reject instances missing what they consume."""

    s: np.ndarray | None = None
    a: np.ndarray | None = None
    f: np.ndarray | None = None
    w2v: np.ndarray | None = None


def _check_inputs(arch: str, required: Sequence[str], X: Sequence[ModelInput]) -> None:
    for idx, inp in enumerate(X):
        for name in required:
            if getattr(inp, name) is None:
                raise InputValidationError(
                    f"{arch} requires the {_INPUT_DESCRIPTIONS[name]} but instance {idx} lacks it"
                )


class _SummariserBase(BaseEstimator, ClassifierMixin):
    """Shared estimator plumbing; subclasses define the network."""

    arch: str = ""
    required_inputs: tuple[str, ...] = ()

    # -- neural protocol -----------------------------------------------------

    def _build(self, rng: np.random.Generator, dims: dict) -> None:
        raise NotImplementedError

    def _dims(self) -> dict:
        raise NotImplementedError

    def _infer_dims(self, X: Sequence[ModelInput]) -> dict:
        raise NotImplementedError

    def parameters(self):
        raise NotImplementedError

    def forward(self, inp: ModelInput, train: bool, rng: np.random.Generator | None) -> np.ndarray:
        raise NotImplementedError

    def backward(self, grad_logits: np.ndarray) -> None:
        raise NotImplementedError

    # -- estimator surface ----------------------------------------------------

    def _train_config(self) -> TrainConfig:
        return TrainConfig(
            dropout_keep=self.dropout_keep,
            optimizer=self.optimizer,
            learning_rate=self.learning_rate,
            batch_size=self.batch_size,
            max_epochs=self.max_epochs,
            patience=self.patience,
            dev_fraction=self.dev_fraction,
            seed=self.seed,
        )

    def fit(self, X: Sequence[ModelInput], y):
        X = list(X)
        y = np.asarray(y, dtype=int)
        if len(X) != len(y):
            raise InputValidationError(f"got {len(X)} inputs but {len(y)} labels")
        if not set(np.unique(y)) <= {0, 1}:
            raise InputValidationError("labels must be binary 0/1")
        _check_inputs(self.arch, self.required_inputs, X)
        self._build(np.random.default_rng(self.seed), self._infer_dims(X))
        self.history_ = train(self, X, y, self._train_config())
        self.classes_ = np.array([0, 1])
        return self

    def _check_fitted(self) -> None:
        if not hasattr(self, "classes_"):
            raise NotFittedError(f"{self.arch} is not fitted; call fit() or load a checkpoint")

    def predict_proba(self, X: Sequence[ModelInput]) -> np.ndarray:
        self._check_fitted()
        X = list(X)
        _check_inputs(self.arch, self.required_inputs, X)
        return np.stack([softmax(self.forward(inp, train=False, rng=None)) for inp in X])

    def predict(self, X: Sequence[ModelInput]) -> np.ndarray:
        # Exact 0.5 ties resolve to class 0.
        return (self.predict_proba(X)[:, 1] > 0.5).astype(int)

    def summary_scores(self, X: Sequence[ModelInput]) -> np.ndarray:
        """Probability of the summary class for each instance."""
        return self.predict_proba(X)[:, 1]


class FNet(_SummariserBase):
    """Features-only classifier: one ReLU hidden layer with dropout over the
    normalized feature vector."""

    arch = "fnet"
    required_inputs = ("f",)

    def __init__(
        self,
        hidden_size: int = 100,
        dropout_keep: float = 0.5,
        optimizer: str = "adam",
        learning_rate: float = 1e-3,
        batch_size: int = 64,
        max_epochs: int = 100,
        patience: int = 5,
        dev_fraction: float = 0.05,
        seed: int = 0,
    ):
        self.hidden_size = hidden_size
        self.dropout_keep = dropout_keep
        self.optimizer = optimizer
        self.learning_rate = learning_rate
        self.batch_size = batch_size
        self.max_epochs = max_epochs
        self.patience = patience
        self.dev_fraction = dev_fraction
        self.seed = seed

    def _infer_dims(self, X):
        return {"input_dim": int(len(X[0].f))}

    def _dims(self):
        return {"input_dim": self.hidden_.in_dim}

    def _build(self, rng, dims):
        self.hidden_ = Dense("hidden", dims["input_dim"], self.hidden_size, rng)
        self.relu_ = Relu()
        self.dropout_ = Dropout(self.dropout_keep)
        self.output_ = Dense("output", self.hidden_size, 2, rng)

    def parameters(self):
        return self.hidden_.parameters() + self.output_.parameters()

    def forward(self, inp, train, rng):
        h = self.relu_.forward(self.hidden_.forward(np.asarray(inp.f, dtype=np.float64)))
        h = self.dropout_.forward(h, train, rng)
        return self.output_.forward(h)

    def backward(self, grad_logits):
        g = self.output_.backward(grad_logits)
        g = self.dropout_.backward(g)
        g = self.relu_.backward(g)
        self.hidden_.backward(g)


class _SingleVectorNet(_SummariserBase):
    """One hidden ReLU layer over a single fixed-size input vector."""

    def __init__(
        self,
        hidden_size: int = 100,
        dropout_keep: float = 0.5,
        optimizer: str = "adam",
        learning_rate: float = 1e-3,
        batch_size: int = 64,
        max_epochs: int = 100,
        patience: int = 5,
        dev_fraction: float = 0.05,
        seed: int = 0,
    ):
        self.hidden_size = hidden_size
        self.dropout_keep = dropout_keep
        self.optimizer = optimizer
        self.learning_rate = learning_rate
        self.batch_size = batch_size
        self.max_epochs = max_epochs
        self.patience = patience
        self.dev_fraction = dev_fraction
        self.seed = seed

    def _vector(self, inp: ModelInput) -> np.ndarray:
        raise NotImplementedError

    def _infer_dims(self, X):
        return {"input_dim": int(len(self._vector(X[0])))}

    def _dims(self):
        return {"input_dim": self.hidden_.in_dim}

    def _build(self, rng, dims):
        self.hidden_ = Dense("hidden", dims["input_dim"], self.hidden_size, rng)
        self.relu_ = Relu()
        self.output_ = Dense("output", self.hidden_size, 2, rng)

    def parameters(self):
        return self.hidden_.parameters() + self.output_.parameters()

    def forward(self, inp, train, rng):
        h = self.relu_.forward(self.hidden_.forward(self._vector(inp)))
        return self.output_.forward(h)

    def backward(self, grad_logits):
        g = self.output_.backward(grad_logits)
        g = self.relu_.backward(g)
        self.hidden_.backward(g)


class Word2VecNet(_SingleVectorNet):
    """Classifies the averaged sentence word vector."""

    arch = "word2vec"
    required_inputs = ("w2v",)

    def _vector(self, inp):
        return np.asarray(inp.w2v, dtype=np.float64)


class Word2VecAFNet(_SingleVectorNet):
    """Sentence average vector + abstract vector + features in one block."""

    arch = "word2vecaf"
    required_inputs = ("w2v", "a", "f")

    def _vector(self, inp):
        return np.concatenate(
            [
                np.asarray(inp.w2v, dtype=np.float64),
                np.asarray(inp.a, dtype=np.float64),
                np.asarray(inp.f, dtype=np.float64),
            ]
        )


class SNet(_SummariserBase):
    """Bidirectional LSTM over the sentence's word vectors, dropout, then a
    2-class projection of the concatenated final hidden states."""

    arch = "snet"
    required_inputs = ("s",)

    def __init__(
        self,
        lstm_hidden: int = 128,
        dropout_keep: float = 0.5,
        optimizer: str = "adam",
        learning_rate: float = 1e-3,
        batch_size: int = 64,
        max_epochs: int = 100,
        patience: int = 5,
        dev_fraction: float = 0.05,
        seed: int = 0,
    ):
        self.lstm_hidden = lstm_hidden
        self.dropout_keep = dropout_keep
        self.optimizer = optimizer
        self.learning_rate = learning_rate
        self.batch_size = batch_size
        self.max_epochs = max_epochs
        self.patience = patience
        self.dev_fraction = dev_fraction
        self.seed = seed

    def _infer_dims(self, X):
        return {"embed_dim": int(X[0].s.shape[1])}

    def _dims(self):
        return {"embed_dim": self.lstm_.fwd.input_dim}

    def _build(self, rng, dims):
        self.lstm_ = BiLstm("lstm", dims["embed_dim"], self.lstm_hidden, rng)
        self.dropout_ = Dropout(self.dropout_keep)
        self.output_ = Dense("output", self.lstm_.out_dim, 2, rng)

    def parameters(self):
        return self.lstm_.parameters() + self.output_.parameters()

    def forward(self, inp, train, rng):
        h = self.lstm_.forward(np.asarray(inp.s, dtype=np.float64))
        h = self.dropout_.forward(h, train, rng)
        return self.output_.forward(h)

    def backward(self, grad_logits):
        g = self.output_.backward(grad_logits)
        g = self.dropout_.backward(g)
        self.lstm_.backward(g)


class SFNet(_SummariserBase):
    """LSTM branch (dense + dropout) and feature branch (dense) concatenated."""

    arch = "sfnet"
    required_inputs = ("s", "f")

    def __init__(
        self,
        lstm_hidden: int = 128,
        branch_size: int = 100,
        dropout_keep: float = 0.5,
        optimizer: str = "adam",
        learning_rate: float = 1e-3,
        batch_size: int = 64,
        max_epochs: int = 100,
        patience: int = 5,
        dev_fraction: float = 0.05,
        seed: int = 0,
    ):
        self.lstm_hidden = lstm_hidden
        self.branch_size = branch_size
        self.dropout_keep = dropout_keep
        self.optimizer = optimizer
        self.learning_rate = learning_rate
        self.batch_size = batch_size
        self.max_epochs = max_epochs
        self.patience = patience
        self.dev_fraction = dev_fraction
        self.seed = seed

    def _infer_dims(self, X):
        return {"embed_dim": int(X[0].s.shape[1]), "feature_dim": int(len(X[0].f))}

    def _dims(self):
        return {"embed_dim": self.lstm_.fwd.input_dim, "feature_dim": self.f_dense_.in_dim}

    def _build(self, rng, dims):
        self.lstm_ = BiLstm("lstm", dims["embed_dim"], self.lstm_hidden, rng)
        self.s_dense_ = Dense("s_branch", self.lstm_.out_dim, self.branch_size, rng)
        self.s_relu_ = Relu()
        self.s_dropout_ = Dropout(self.dropout_keep)
        self.f_dense_ = Dense("f_branch", dims["feature_dim"], self.branch_size, rng)
        self.f_relu_ = Relu()
        self.output_ = Dense("output", 2 * self.branch_size, 2, rng)

    def parameters(self):
        return (
            self.lstm_.parameters()
            + self.s_dense_.parameters()
            + self.f_dense_.parameters()
            + self.output_.parameters()
        )

    def forward(self, inp, train, rng):
        hs = self.s_relu_.forward(self.s_dense_.forward(self.lstm_.forward(np.asarray(inp.s, dtype=np.float64))))
        hs = self.s_dropout_.forward(hs, train, rng)
        hf = self.f_relu_.forward(self.f_dense_.forward(np.asarray(inp.f, dtype=np.float64)))
        return self.output_.forward(np.concatenate([hs, hf]))

    def backward(self, grad_logits):
        g = self.output_.backward(grad_logits)
        gs, gf = g[: self.branch_size], g[self.branch_size :]
        gs = self.s_relu_.backward(self.s_dropout_.backward(gs))
        self.lstm_.backward(self.s_dense_.backward(gs))
        self.f_dense_.backward(self.f_relu_.backward(gf))


class SAFNet(_SummariserBase):
    """Three branches: LSTM-encoded sentence (with dropout), abstract vector
    and features, each through a ReLU dense layer, concatenated and projected."""

    arch = "safnet"
    required_inputs = ("s", "a", "f")

    def __init__(
        self,
        lstm_hidden: int = 128,
        branch_size: int = 100,
        dropout_keep: float = 0.5,
        optimizer: str = "adam",
        learning_rate: float = 1e-3,
        batch_size: int = 64,
        max_epochs: int = 100,
        patience: int = 5,
        dev_fraction: float = 0.05,
        seed: int = 0,
    ):
        self.lstm_hidden = lstm_hidden
        self.branch_size = branch_size
        self.dropout_keep = dropout_keep
        self.optimizer = optimizer
        self.learning_rate = learning_rate
        self.batch_size = batch_size
        self.max_epochs = max_epochs
        self.patience = patience
        self.dev_fraction = dev_fraction
        self.seed = seed

    def _infer_dims(self, X):
        return {
            "embed_dim": int(X[0].s.shape[1]),
            "abstract_dim": int(len(X[0].a)),
            "feature_dim": int(len(X[0].f)),
        }

    def _dims(self):
        return {
            "embed_dim": self.lstm_.fwd.input_dim,
            "abstract_dim": self.a_dense_.in_dim,
            "feature_dim": self.f_dense_.in_dim,
        }

    def _build(self, rng, dims):
        self.lstm_ = BiLstm("lstm", dims["embed_dim"], self.lstm_hidden, rng)
        self.s_dense_ = Dense("s_branch", self.lstm_.out_dim, self.branch_size, rng)
        self.s_relu_ = Relu()
        self.s_dropout_ = Dropout(self.dropout_keep)
        self.a_dense_ = Dense("a_branch", dims["abstract_dim"], self.branch_size, rng)
        self.a_relu_ = Relu()
        self.f_dense_ = Dense("f_branch", dims["feature_dim"], self.branch_size, rng)
        self.f_relu_ = Relu()
        self.output_ = Dense("output", 3 * self.branch_size, 2, rng)

    def parameters(self):
        return (
            self.lstm_.parameters()
            + self.s_dense_.parameters()
            + self.a_dense_.parameters()
            + self.f_dense_.parameters()
            + self.output_.parameters()
        )

    def forward(self, inp, train, rng):
        hs = self.s_relu_.forward(self.s_dense_.forward(self.lstm_.forward(np.asarray(inp.s, dtype=np.float64))))
        hs = self.s_dropout_.forward(hs, train, rng)
        ha = self.a_relu_.forward(self.a_dense_.forward(np.asarray(inp.a, dtype=np.float64)))
        hf = self.f_relu_.forward(self.f_dense_.forward(np.asarray(inp.f, dtype=np.float64)))
        return self.output_.forward(np.concatenate([hs, ha, hf]))

    def backward(self, grad_logits):
        g = self.output_.backward(grad_logits)
        b = self.branch_size
        gs, ga, gf = g[:b], g[b : 2 * b], g[2 * b :]
        gs = self.s_relu_.backward(self.s_dropout_.backward(gs))
        self.lstm_.backward(self.s_dense_.backward(gs))
        self.a_dense_.backward(self.a_relu_.backward(ga))
        self.f_dense_.backward(self.f_relu_.backward(gf))


ARCH_CLASSES: dict[str, type[_SummariserBase]] = {
    "fnet": FNet,
    "word2vec": Word2VecNet,
    "word2vecaf": Word2VecAFNet,
    "snet": SNet,
    "sfnet": SFNet,
    "safnet": SAFNet,
}


def make_model(arch: str, **params) -> _SummariserBase:
    if arch not in ARCH_CLASSES:
        raise ValueError(f"unknown architecture {arch!r}; expected one of {', '.join(ARCHITECTURES)}")
    return ARCH_CLASSES[arch](**params)


# --- persistence --------------------------------------------------------------


def save_model(model: _SummariserBase, path: str | Path, preprocessing: dict | None = None) -> None:
    model._check_fitted()
    blocks = {p.name: p.value for p in model.parameters()}
    meta = {
        "arch": model.arch,
        "params": model.get_params(),
        "dims": model._dims(),
        "preprocessing": preprocessing or {},
    }
    save_checkpoint(path, blocks, meta)


def load_model(path: str | Path) -> tuple[_SummariserBase, dict]:
    blocks, meta = load_checkpoint(path)
    model = make_model(meta["arch"], **meta["params"])
    model._build(np.random.default_rng(0), meta["dims"])
    for p in model.parameters():
        if p.name not in blocks:
            raise ValueError(f"checkpoint {path} is missing parameter block {p.name!r}")
        if blocks[p.name].shape != p.value.shape:
            raise ValueError(
                f"checkpoint block {p.name!r} has shape {blocks[p.name].shape}, expected {p.value.shape}"
            )
        p.value[...] = blocks[p.name]
    model.classes_ = np.array([0, 1])
    return model, meta


# --- ensembling ----------------------------------------------------------------

ENSEMBLE_PRESETS = {
    "saf+f": ("safnet", "fnet"),
    "s+f": ("snet", "fnet"),
}


@dataclass(frozen=True)
class EnsembleConfig:
    c: float
    s1_model: str
    s2_model: str

    def __post_init__(self) -> None:
        if not -1.0 <= self.c <= 1.0:
            raise ValueError(f"ensemble weight c must be in [-1, 1], got {self.c}")

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump({"c": self.c, "s1": self.s1_model, "s2": self.s2_model}, fh)
            fh.write("\n")

    @classmethod
    def load(cls, path: str | Path) -> "EnsembleConfig":
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        return cls(c=float(raw["c"]), s1_model=raw["s1"], s2_model=raw["s2"])


def ensemble_probability(p1: float, p2: float, c: float) -> float:
    """Weighted average of two summariser outputs: (p1(1-c) + p2(1+c)) / 2."""
    if not -1.0 <= c <= 1.0:
        raise ValueError(f"ensemble weight c must be in [-1, 1], got {c}")
    if not (0.0 <= p1 <= 1.0 and 0.0 <= p2 <= 1.0):
        raise ValueError(f"ensemble inputs must be probabilities, got {p1}, {p2}")
    return (p1 * (1.0 - c) + p2 * (1.0 + c)) / 2.0


# --- single-feature rankers -----------------------------------------------------

RANKABLE_FEATURES = ("abstract_rouge", "title_score", "keyphrase_score", "tf_idf", "doc_tf_idf")
EXCLUDED_RANKING_FEATURES = ("sentence_length", "numeric_count", "location")


def single_feature_ranker(feature_name: str):
    """Scorer using one raw feature value directly as the ranking score.

    Length, numeric count and location are refused: they take too few
    distinct values to order sentences meaningfully.
    """
    if feature_name in EXCLUDED_RANKING_FEATURES:
        raise ValueError(
            f"feature {feature_name!r} is too coarse-grained to rank sentences by; "
            f"excluded: {', '.join(EXCLUDED_RANKING_FEATURES)}"
        )
    if feature_name not in RANKABLE_FEATURES:
        raise ValueError(
            f"unknown rankable feature {feature_name!r}; expected one of {', '.join(RANKABLE_FEATURES)}"
        )

    def score(features: SentenceFeatures) -> float:
        return float(getattr(features, feature_name))

    return score


# --- input assembly --------------------------------------------------------------


class InputAssembler:
    """Joins sentences with their paper context into ModelInput records.

    Holds the corpus statistics, the fitted feature normalizer, the optional
    embedding table and the feature-exclusion mask, so dataset assembly and
    summary-time scoring produce identical representations.
    """

    def __init__(
        self,
        papers: Sequence[Paper],
        table: EmbeddingTable | None = None,
        corpus_stats: CorpusStats | None = None,
        stopwords: frozenset[str] | None = None,
        rouge_cfg: RougeConfig = DEFAULT_ROUGE,
        exclude_features: Sequence[str] = (),
    ):
        unknown = set(exclude_features) - set(FEATURE_NAMES)
        if unknown:
            raise ValueError(f"unknown feature names in exclude_features: {sorted(unknown)}")
        self.papers_by_id = {p.id: p for p in papers}
        self.stopwords = stopwords if stopwords is not None else default_stopwords()
        self.corpus_stats = corpus_stats or CorpusStats.from_papers(papers, self.stopwords)
        self.table = table
        self.rouge_cfg = rouge_cfg
        self.exclude_features = tuple(exclude_features)
        self.feature_indices = [i for i, n in enumerate(FEATURE_NAMES) if n not in exclude_features]
        self.normalizer = FeatureNormalizer()
        self._paper_stats: dict[str, PaperStats] = {}
        self._abstract_vectors: dict[str, np.ndarray] = {}

    @property
    def feature_dim(self) -> int:
        return len(self.feature_indices)

    def paper_stats(self, paper: Paper) -> PaperStats:
        stats = self._paper_stats.get(paper.id)
        if stats is None:
            stats = PaperStats.from_paper(paper)
            self._paper_stats[paper.id] = stats
        return stats

    def _paper(self, paper_id: str) -> Paper:
        try:
            return self.papers_by_id[paper_id]
        except KeyError:
            raise InputValidationError(f"instance references unknown paper {paper_id!r}") from None

    def sentence_features(self, tokens: Sequence[str], location: LocationCategory, paper: Paper) -> SentenceFeatures:
        return extract_features(tokens, location, paper, self.paper_stats(paper), self.corpus_stats, self.rouge_cfg)

    def _raw_row(self, tokens, location, paper) -> np.ndarray:
        return self.sentence_features(tokens, location, paper).to_vector()[self.feature_indices]

    def raw_feature_matrix(self, instances: Sequence[LabeledInstance]) -> np.ndarray:
        return np.stack(
            [self._raw_row(i.sentence.tokens, i.location, self._paper(i.paper_id)) for i in instances]
        )

    def fit(self, train_instances: Sequence[LabeledInstance]) -> "InputAssembler":
        """Fit the feature normalizer on the training split only."""
        self.normalizer.fit(self.raw_feature_matrix(train_instances))
        return self

    def set_normalizer_stats(self, mean: Sequence[float], std: Sequence[float]) -> None:
        self.normalizer.mean_ = np.asarray(mean, dtype=np.float64)
        self.normalizer.std_ = np.asarray(std, dtype=np.float64)

    def normalizer_stats(self) -> dict:
        return {
            "mean": self.normalizer.mean_.tolist(),
            "std": self.normalizer.std_.tolist(),
            "exclude_features": list(self.exclude_features),
        }

    def sequence_matrix(self, tokens: Sequence[str]) -> np.ndarray:
        """In-vocabulary token vectors in order; a single zero vector when no
        token is known, so every sentence stays scoreable."""
        if self.table is None:
            raise InputValidationError("this assembler has no embedding table; sequence input unavailable")
        rows = [self.table.vocabulary[t] for t in tokens if t in self.table.vocabulary]
        if not rows:
            return np.zeros((1, self.table.dim))
        return self.table.vectors[rows].astype(np.float64)

    def abstract_vec(self, paper: Paper) -> np.ndarray:
        vec = self._abstract_vectors.get(paper.id)
        if vec is None:
            vec = abstract_vector(paper.abstract, self.table, self.stopwords)
            self._abstract_vectors[paper.id] = vec
        return vec

    def model_input(self, tokens: Sequence[str], location: LocationCategory, paper: Paper) -> ModelInput:
        raw = self._raw_row(tokens, location, paper)
        f = self.normalizer.transform(raw.reshape(1, -1))[0]
        if self.table is None:
            return ModelInput(f=f)
        return ModelInput(
            s=self.sequence_matrix(tokens),
            a=self.abstract_vec(paper),
            f=f,
            w2v=sentence_vector(tokens, self.table, self.stopwords),
        )

    def assemble(self, instances: Sequence[LabeledInstance]) -> list[ModelInput]:
        return [
            self.model_input(i.sentence.tokens, i.location, self._paper(i.paper_id)) for i in instances
        ]

    @staticmethod
    def labels(instances: Sequence[LabeledInstance]) -> np.ndarray:
        return np.array([i.label for i in instances], dtype=int)
