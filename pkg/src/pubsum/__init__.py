"""pubsum: extractive summarisation of scientific publications.

Builds labeled sentence-classification datasets from a paper corpus by
scoring body sentences against author highlights with ROUGE-L, extracts 8
contextual sentence features, trains a family of summariser architectures
(feature, word-vector and bidirectional-LSTM based, plus weighted
ensembles), and evaluates generated summaries against the gold highlights.
"""

__version__ = "0.1.0"

from .corpus import (
    BodySentence,
    CorpusError,
    LocationCategory,
    Paper,
    Section,
    Sentence,
    body_sentences,
    classify_heading,
    load_corpus,
    save_corpus,
    tokenize,
)
from .dataset import (
    DatasetError,
    DatasetSpec,
    LabeledInstance,
    build_cspubsum,
    build_cspubsumext,
    load_instances,
    save_instances,
    score_body_sentences,
)
from .embeddings import (
    EmbeddingTable,
    SkipGramConfig,
    SkipGramModel,
    abstract_vector,
    sentence_vector,
    train_skipgram,
)
from .features import (
    FEATURE_NAMES,
    CorpusStats,
    FeatureNormalizer,
    PaperStats,
    SentenceFeatures,
    extract_features,
)
from .models import (
    ARCHITECTURES,
    EnsembleConfig,
    FNet,
    InputAssembler,
    ModelInput,
    SAFNet,
    SFNet,
    SNet,
    Word2VecAFNet,
    Word2VecNet,
    ensemble_probability,
    load_model,
    make_model,
    save_model,
    single_feature_ranker,
)
from .rouge import RougeConfig, RougeScore, lcs_length, rouge_l, rouge_l_multi
from .evaluation import (
    EvalReport,
    MethodEvaluation,
    SummaryResult,
    copy_paste_analysis,
    evaluate_accuracy,
    evaluate_rouge,
    generate_summary,
    oracle_summary,
    pearson_r,
    section_rouge_analysis,
    tune_ensemble_weight,
    unpaired_t_test,
)
from .baselines import BaselineConfig, klsum, lexrank, lsa_summarise, sumbasic, textrank
from .fixtures import generate_corpus, generate_corpus_records
