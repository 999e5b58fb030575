import math

import numpy as np
import pytest
from sklearn.exceptions import NotFittedError

from pubsum.corpus import LocationCategory, tokenize
from pubsum.features import (
    FEATURE_NAMES,
    CorpusStats,
    FeatureNormalizer,
    PaperStats,
    abstract_rouge,
    doc_tf_idf,
    extract_features,
    keyphrase_score,
    numeric_count,
    sentence_length,
    tf_idf,
    title_score,
)
from pubsum.rouge import rouge_l

from conftest import make_paper

STOP = frozenset({"the", "a", "of", "was", "is", "we", "and", "in", "with"})


class TestAbstractRouge:
    def test_identical_to_single_sentence_abstract(self):
        paper = make_paper(abstract=("graph routing works well.",))
        tokens = tokenize("graph routing works well.")
        assert abstract_rouge(tokens, paper.abstract) == 1.0

    def test_disjoint(self):
        paper = make_paper(abstract=("alpha beta gamma.",))
        assert abstract_rouge(["delta", "epsilon"], paper.abstract) == 0.0

    def test_equals_hand_concatenation_for_two_sentences(self):
        paper = make_paper(abstract=("graph routing is fast.", "kernel pruning is safe."))
        tokens = ["graph", "pruning", "is", "everything"]
        concatenated = tokenize("graph routing is fast.") + tokenize("kernel pruning is safe.")
        assert abstract_rouge(tokens, paper.abstract) == rouge_l(tokens, concatenated).f_score


class TestNumericCount:
    def test_counts_integers_and_decimals(self):
        assert numeric_count(tokenize("accuracy was 0.93 over 10 runs")) == 2

    def test_zero_when_no_numbers(self):
        assert numeric_count(tokenize("no numbers here")) == 0

    def test_tokenizer_split_assignment(self):
        assert numeric_count(tokenize("m=10")) == 1

    def test_words_that_parse_as_float_are_not_numbers(self):
        assert numeric_count(["nan", "inf", "1e5"]) == 0


class TestTitleScore:
    def test_sentence_equal_to_title(self):
        paper = make_paper(title="graph routing with kernel pruning")
        count = title_score(paper.title.tokens, paper.title, STOP)
        assert count == 4  # graph, routing, kernel, pruning; "with" is a stopword

    def test_disjoint_sentence(self):
        paper = make_paper(title="graph routing")
        assert title_score(["unrelated", "words"], paper.title, STOP) == 0

    def test_repeated_title_word_counts_twice(self):
        paper = make_paper(title="graph routing")
        assert title_score(["graph", "graph", "other"], paper.title, STOP) == 2

    def test_type_counting_flag(self):
        paper = make_paper(title="graph routing")
        assert title_score(["graph", "graph", "other"], paper.title, STOP, count_types=True) == 1


class TestKeyphraseScore:
    def test_contiguous_phrase_found(self):
        tokens = tokenize("the domain name graph is new")
        assert keyphrase_score(tokens, ["domain name graph"]) == 1

    def test_absent_keyword(self):
        assert keyphrase_score(["nothing", "relevant"], ["domain name graph"]) == 0

    def test_two_distinct_keywords(self):
        tokens = tokenize("kernel pruning beats graph routing")
        assert keyphrase_score(tokens, ["kernel pruning", "graph routing"]) == 2

    def test_non_contiguous_does_not_match(self):
        tokens = ["domain", "x", "name", "graph"]
        assert keyphrase_score(tokens, ["domain name graph"]) == 0


def _corpus_for_tfidf():
    shared = "the shared term appears here."
    papers = [
        make_paper(
            paper_id=f"p{i}",
            title="shared title words",
            abstract=(shared,),
            highlights=("a highlight sentence.",),
            sections=[("Introduction", [shared, "unrelated filler text."])],
        )
        for i in range(3)
    ]
    return papers


class TestTfIdf:
    def test_token_in_every_document_contributes_zero(self):
        papers = _corpus_for_tfidf()
        stats = CorpusStats.from_papers(papers, STOP)
        paper_stats = PaperStats.from_paper(papers[0])
        assert tf_idf(["shared"], paper_stats, stats) == pytest.approx(0.0, abs=1e-12)

    def test_unique_token_hand_formula(self):
        papers = _corpus_for_tfidf()
        unique = make_paper(
            paper_id="unique",
            title="specialword title",
            abstract=("specialword appears once here.",),
            sections=[("Introduction", ["more text follows naturally."])],
        )
        corpus = papers + [unique]
        stats = CorpusStats.from_papers(corpus, STOP)
        paper_stats = PaperStats.from_paper(unique)
        n = paper_stats.token_counts["specialword"]
        expected = (n / paper_stats.total_tokens) * math.log(len(corpus) / 1)
        assert tf_idf(["specialword"], paper_stats, stats) == pytest.approx(expected, rel=1e-12)

    def test_all_stopword_sentence_is_zero(self):
        papers = _corpus_for_tfidf()
        stats = CorpusStats.from_papers(papers, STOP)
        paper_stats = PaperStats.from_paper(papers[0])
        assert tf_idf(["the", "of", "a"], paper_stats, stats) == 0.0


class TestDocTfIdf:
    def test_word_in_every_sentence_contributes_zero(self):
        paper = make_paper(
            title="pivot word",
            abstract=("pivot appears again.",),
            highlights=("unrelated highlight.",),
            sections=[("Introduction", ["pivot in body one.", "pivot in body two."])],
        )
        # pivot occurs in title, abstract and both body sentences: sf = S.
        stats = PaperStats.from_paper(paper)
        assert stats.sentence_frequency["pivot"] == stats.num_sentences
        assert doc_tf_idf(["pivot"], stats, STOP) == pytest.approx(0.0, abs=1e-12)

    def test_double_occurrence_hand_formula(self):
        # Exactly 10 sentences: title + 1 abstract + 8 body; "rare" only in the tested sentence.
        body = [f"filler text number {i}." for i in range(8)]
        paper = make_paper(
            title="some plain title",
            abstract=("one abstract sentence.",),
            sections=[("Introduction", body)],
        )
        stats = PaperStats.from_paper(paper)
        assert stats.num_sentences == 10
        assert doc_tf_idf(["rare", "rare"], stats, STOP) == pytest.approx(2 * math.log(10), rel=1e-12)

    def test_all_stopword_sentence_is_zero(self):
        paper = make_paper()
        assert doc_tf_idf(["the", "a"], PaperStats.from_paper(paper), STOP) == 0.0

    def test_independent_of_background_corpus(self):
        paper = make_paper()
        stats = PaperStats.from_paper(paper)
        tokens = tokenize("routing is studied here.")
        once = doc_tf_idf(tokens, stats, STOP)
        # Duplicating the paper in the corpus cannot reach this computation.
        assert doc_tf_idf(tokens, PaperStats.from_paper(paper), STOP) == once


class TestExtractFeatures:
    def test_vector_layout_and_finiteness(self, small_corpus):
        stats = CorpusStats.from_papers(small_corpus)
        paper = small_corpus[0]
        pstats = PaperStats.from_paper(paper)
        sentence = paper.sections[0].sentences[0]
        features = extract_features(
            sentence.tokens, LocationCategory.INTRODUCTION, paper, pstats, stats
        )
        vec = features.to_vector()
        assert vec.shape == (len(FEATURE_NAMES),)
        assert np.all(np.isfinite(vec))
        assert features.location == 2
        assert features.sentence_length == len(sentence.tokens) >= 1
        assert features.abstract_rouge >= 0 and features.tf_idf >= 0 and features.doc_tf_idf >= 0

    def test_purity(self, small_corpus):
        stats = CorpusStats.from_papers(small_corpus)
        paper = small_corpus[1]
        pstats = PaperStats.from_paper(paper)
        tokens = paper.sections[0].sentences[0].tokens
        a = extract_features(tokens, LocationCategory.METHOD, paper, pstats, stats)
        b = extract_features(tokens, LocationCategory.METHOD, paper, pstats, stats)
        assert a == b


class TestFeatureNormalizer:
    def test_train_mean_maps_to_zero(self):
        X = np.array([[1.0, 10.0], [3.0, 30.0], [5.0, 20.0]])
        norm = FeatureNormalizer().fit(X)
        transformed = norm.transform(X.mean(axis=0, keepdims=True))
        assert np.allclose(transformed, 0.0)

    def test_identity_when_mean_zero_std_one(self):
        rng = np.random.default_rng(0)
        X = rng.normal(size=(200, 3))
        norm = FeatureNormalizer().fit(X)
        norm.mean_ = np.zeros(3)
        norm.std_ = np.ones(3)
        assert np.allclose(norm.transform(X), X)

    def test_hand_z_score(self):
        X = np.array([[0.0], [2.0]])
        norm = FeatureNormalizer().fit(X)
        # mean 1, population std 1 -> z(4) = 3.
        assert norm.transform(np.array([[4.0]]))[0, 0] == pytest.approx(3.0, abs=1e-12)

    def test_zero_std_column_passthrough_as_zero(self):
        X = np.array([[2.0, 1.0], [2.0, 3.0]])
        norm = FeatureNormalizer().fit(X)
        out = norm.transform(np.array([[7.0, 2.0]]))
        assert out[0, 0] == 0.0
        assert out[0, 1] == pytest.approx(0.0, abs=1e-12)

    def test_unfitted_transform_raises(self):
        with pytest.raises(NotFittedError):
            FeatureNormalizer().transform(np.zeros((1, 8)))

    def test_affine_rescaling_absorbed(self):
        # z-scores are invariant to an affine rescale of a feature column
        # when the statistics come from the rescaled data.
        rng = np.random.default_rng(4)
        X = rng.normal(size=(60, 4))
        scaled = X.copy()
        scaled[:, 2] = 13.0 * scaled[:, 2] - 5.0
        z_plain = FeatureNormalizer().fit(X).transform(X)
        z_scaled = FeatureNormalizer().fit(scaled).transform(scaled)
        assert np.allclose(z_plain, z_scaled, atol=1e-10)
