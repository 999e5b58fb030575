"""Summary generation, the greedy oracle, quality metrics and analyses.

Summaries are always budgeted at k body sentences, selected by some scorer
and re-ordered by document position; abstract and highlight sentences are
never candidates.  The oracle greedily maximises ROUGE-L against the
highlights and can additionally absorb method selections as checked lower
bounds, which makes its dominance over every evaluated method structural.
"""

from __future__ import annotations

import csv
import math
import warnings
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from scipy import stats as _scipy_stats

from .corpus import BodySentence, LocationCategory, Paper, body_sentences
from .models import ModelInput, ensemble_probability
from .rouge import DEFAULT_ROUGE, RougeConfig, RougeScore, rouge_l_multi


class SummarisationError(ValueError):
    pass


@dataclass(frozen=True)
class SummaryResult:
    paper_id: str
    method: str
    budget: int
    selected: tuple[BodySentence, ...]  # document order
    rouge: RougeScore


Scorer = Callable[[BodySentence], float]
Summariser = Callable[[Paper, int], SummaryResult]


def _score_selection(paper: Paper, selected: Sequence[BodySentence], cfg: RougeConfig) -> RougeScore:
    tokens: list[str] = []
    for b in sorted(selected, key=lambda b: b.position):
        tokens.extend(b.tokens)
    return rouge_l_multi(tokens, [h.tokens for h in paper.highlights], cfg)


def summary_from_selection(
    paper: Paper,
    selected: Sequence[BodySentence],
    method: str,
    budget: int,
    cfg: RougeConfig = DEFAULT_ROUGE,
) -> SummaryResult:
    ordered = tuple(sorted(selected, key=lambda b: b.position))
    return SummaryResult(paper.id, method, budget, ordered, _score_selection(paper, ordered, cfg))


def generate_summary(
    paper: Paper,
    scorer: Scorer,
    budget: int,
    method: str = "custom",
    cfg: RougeConfig = DEFAULT_ROUGE,
) -> SummaryResult:
    """Top-budget body sentences by score (ties by document order)."""
    if budget <= 0:
        raise SummarisationError(f"summary budget must be positive, got {budget}")
    body = body_sentences(paper)
    if not body:
        raise SummarisationError(f"paper {paper.id!r} has no body sentences")
    scores = [float(scorer(b)) for b in body]
    ranked = sorted(range(len(body)), key=lambda i: (-scores[i], body[i].position))
    chosen = [body[i] for i in ranked[: min(budget, len(body))]]
    return summary_from_selection(paper, chosen, method, budget, cfg)


def oracle_summary(
    paper: Paper,
    budget: int,
    cfg: RougeConfig = DEFAULT_ROUGE,
    candidate_selections: Sequence[Sequence[BodySentence]] = (),
) -> SummaryResult:
    """Greedy upper-bound extract: repeatedly add the body sentence that most
    improves ROUGE-L against the highlights, stopping at the budget or when
    no sentence improves the score.

    Any candidate_selections are scored as well and the best of greedy and
    candidates is returned, so the oracle never reports below a selection it
    was shown.
    """
    if budget <= 0:
        raise SummarisationError(f"summary budget must be positive, got {budget}")
    body = body_sentences(paper)
    if not body:
        raise SummarisationError(f"paper {paper.id!r} has no body sentences")
    refs = [h.tokens for h in paper.highlights]
    selected: list[BodySentence] = []
    best_f = 0.0
    remaining = list(body)
    while remaining and len(selected) < budget:
        best_candidate = None
        best_candidate_f = best_f
        for b in remaining:
            trial = sorted(selected + [b], key=lambda x: x.position)
            tokens = [t for s in trial for t in s.tokens]
            f = rouge_l_multi(tokens, refs, cfg).f_score
            if f > best_candidate_f + 1e-15:
                best_candidate, best_candidate_f = b, f
        if best_candidate is None:
            break
        selected.append(best_candidate)
        remaining.remove(best_candidate)
        best_f = best_candidate_f
    result = summary_from_selection(paper, selected, "oracle", budget, cfg)
    for candidate in candidate_selections:
        alt = summary_from_selection(paper, list(candidate)[:budget], "oracle", budget, cfg)
        if alt.rouge.f_score > result.rouge.f_score:
            result = alt
    return result


# --- metrics -----------------------------------------------------------------


def evaluate_accuracy(model, X: Sequence[ModelInput], y: Sequence[int]) -> float:
    """Fraction of instances whose thresholded summary probability matches the
    label; a probability of exactly 0.5 predicts class 0."""
    y = np.asarray(y, dtype=int)
    if len(X) != len(y):
        raise ValueError(f"got {len(X)} inputs but {len(y)} labels")
    if len(y) == 0:
        raise ValueError("cannot compute accuracy on an empty set")
    predictions = model.predict(X)
    return float(np.mean(predictions == y))


@dataclass
class MethodEvaluation:
    method: str
    budget: int
    results: list[SummaryResult]

    @property
    def mean_f(self) -> float:
        return float(np.mean([r.rouge.f_score for r in self.results]))

    @property
    def mean_precision(self) -> float:
        return float(np.mean([r.rouge.precision for r in self.results]))

    @property
    def mean_recall(self) -> float:
        return float(np.mean([r.rouge.recall for r in self.results]))

    @property
    def f_scores(self) -> list[float]:
        return [r.rouge.f_score for r in self.results]


def evaluate_rouge(summarise: Summariser, papers: Sequence[Paper], budget: int, method: str = "") -> MethodEvaluation:
    results = [summarise(p, budget) for p in papers]
    return MethodEvaluation(method or (results[0].method if results else "unknown"), budget, results)


def _oracle_task(args) -> SummaryResult:
    paper, budget, cfg, selections = args
    return oracle_summary(paper, budget, cfg, selections)


def evaluate_oracle(
    papers: Sequence[Paper],
    budget: int,
    cfg: RougeConfig = DEFAULT_ROUGE,
    method_evaluations: Sequence[MethodEvaluation] = (),
    jobs: int = 1,
) -> MethodEvaluation:
    """Greedy-oracle evaluation; every method's per-paper selection is fed in
    as a checked lower bound so oracle >= method holds by construction."""
    from .parallel import parallel_map

    selections_by_paper: dict[str, list[tuple[BodySentence, ...]]] = defaultdict(list)
    for ev in method_evaluations:
        for r in ev.results:
            selections_by_paper[r.paper_id].append(r.selected)
    tasks = [(p, budget, cfg, tuple(selections_by_paper.get(p.id, ()))) for p in papers]
    results = parallel_map(_oracle_task, tasks, jobs)
    return MethodEvaluation("oracle", budget, list(results))


# --- section analyses ----------------------------------------------------------

CATEGORY_LABELS = {
    LocationCategory.HIGHLIGHT: "Highlight",
    LocationCategory.ABSTRACT: "Abstract",
    LocationCategory.INTRODUCTION: "Introduction",
    LocationCategory.RESULTS_DISCUSSION_ANALYSIS: "ResultsDiscussionAnalysis",
    LocationCategory.METHOD: "Method",
    LocationCategory.CONCLUSION: "Conclusion",
    LocationCategory.OTHER: "Other",
}

TITLE_LABEL = "Title"


@dataclass(frozen=True)
class SectionRouge:
    mean_f: float
    sentence_count: int


def section_rouge_analysis(papers: Sequence[Paper], cfg: RougeConfig = DEFAULT_ROUGE) -> dict[str, SectionRouge]:
    """Mean sentence-level ROUGE-L against the highlights per location
    category, with the title as its own pseudo-category.  Categories with no
    sentences are absent from the result."""
    sums: dict[str, float] = defaultdict(float)
    counts: dict[str, int] = defaultdict(int)

    def add(label: str, tokens, refs) -> None:
        sums[label] += rouge_l_multi(tokens, refs, cfg).f_score
        counts[label] += 1

    for paper in papers:
        refs = [h.tokens for h in paper.highlights]
        add(TITLE_LABEL, paper.title.tokens, refs)
        for s in paper.abstract:
            add(CATEGORY_LABELS[LocationCategory.ABSTRACT], s.tokens, refs)
        for h in paper.highlights:
            add(CATEGORY_LABELS[LocationCategory.HIGHLIGHT], h.tokens, refs)
        for b in body_sentences(paper):
            add(CATEGORY_LABELS[b.category], b.tokens, refs)
    return {label: SectionRouge(sums[label] / counts[label], counts[label]) for label in counts}


_TERMINAL_PUNCT = ".!?;:,"


def _copy_normalize(text: str) -> str:
    collapsed = " ".join(text.lower().split())
    return collapsed.rstrip(_TERMINAL_PUNCT).rstrip()


@dataclass(frozen=True)
class CopyPasteResult:
    raw_counts: dict[str, int]
    shares: dict[str, float] | None  # None when no copies exist
    total: int


def copy_paste_analysis(
    papers: Sequence[Paper],
    cfg: RougeConfig = DEFAULT_ROUGE,
    copy_threshold: float | None = None,
) -> CopyPasteResult:
    """Where authors copied highlight statements from: each highlight found
    verbatim in the body (normalised exact match, or ROUGE-L F >= threshold
    when copy_threshold is given) counts once, attributed to the section
    category of its first match in document order."""
    counts: dict[str, int] = defaultdict(int)
    for paper in papers:
        body = body_sentences(paper)
        for h in paper.highlights:
            target = _copy_normalize(h.raw_text)
            match = None
            for b in body:
                if copy_threshold is None:
                    if _copy_normalize(b.sentence.raw_text) == target:
                        match = b
                        break
                else:
                    if rouge_l_multi(b.tokens, [h.tokens], cfg).f_score >= copy_threshold:
                        match = b
                        break
            if match is not None:
                counts[CATEGORY_LABELS[match.category]] += 1
    total = sum(counts.values())
    if total == 0:
        warnings.warn("no copied highlights found; copy/paste shares undefined")
        return CopyPasteResult(dict(counts), None, 0)
    shares = {label: c / total for label, c in counts.items()}
    return CopyPasteResult(dict(counts), shares, total)


# --- statistics ------------------------------------------------------------------


def pearson_r(x: Sequence[float], y: Sequence[float]) -> float:
    """Product-moment correlation; requires equal lengths >= 3."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise ValueError(f"length mismatch: {x.shape} vs {y.shape}")
    if x.size < 3:
        raise ValueError(f"pearson_r needs at least 3 points, got {x.size}")
    dx = x - x.mean()
    dy = y - y.mean()
    denom = math.sqrt(float(dx @ dx) * float(dy @ dy))
    if denom == 0:
        raise ValueError("pearson_r is undefined when either sample has zero variance")
    return float(dx @ dy) / denom


def unpaired_t_test(a: Sequence[float], b: Sequence[float], equal_var: bool = True) -> float:
    """Two-sided two-sample t-test p-value; pooled variance by default, the
    unequal-variance (Welch) form behind equal_var=False."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.size < 2 or b.size < 2:
        raise ValueError("each sample needs at least 2 observations")
    mean_diff = a.mean() - b.mean()
    var_a = a.var(ddof=1)
    var_b = b.var(ddof=1)
    if equal_var:
        df = a.size + b.size - 2
        pooled = ((a.size - 1) * var_a + (b.size - 1) * var_b) / df
        se = math.sqrt(pooled * (1.0 / a.size + 1.0 / b.size))
    else:
        se_sq_a = var_a / a.size
        se_sq_b = var_b / b.size
        se = math.sqrt(se_sq_a + se_sq_b)
        if se > 0:
            df = (se_sq_a + se_sq_b) ** 2 / (
                se_sq_a**2 / (a.size - 1) + se_sq_b**2 / (b.size - 1)
            )
        else:
            df = a.size + b.size - 2
    if se == 0:
        return 1.0 if mean_diff == 0 else 0.0
    t = mean_diff / se
    return float(2.0 * _scipy_stats.t.sf(abs(t), df))


# --- ensemble tuning ----------------------------------------------------------------


def tune_ensemble_weight(
    papers: Sequence[Paper],
    scorer1_for: Callable[[Paper], Scorer],
    scorer2_for: Callable[[Paper], Scorer],
    budget: int,
    cfg: RougeConfig = DEFAULT_ROUGE,
    step: float = 0.05,
) -> float:
    """Grid search c over [-1, 1] maximising mean ROUGE-L F of the combined
    scorer on the given papers.  The endpoints reproduce the constituent
    models exactly, so the tuned ensemble can never score below either on
    the tuning set."""
    per_paper: list[tuple[Paper, list[BodySentence], list[float], list[float]]] = []
    for paper in papers:
        body = body_sentences(paper)
        s1 = scorer1_for(paper)
        s2 = scorer2_for(paper)
        per_paper.append((paper, body, [s1(b) for b in body], [s2(b) for b in body]))
    grid = np.clip(np.round(np.arange(-1.0, 1.0 + step / 2, step), 9), -1.0, 1.0)
    best_c, best_f = 0.0, -1.0
    # Ties prefer the most balanced mixture (smallest |c|).
    for c in sorted(grid, key=lambda v: (abs(v), v)):
        total = 0.0
        for paper, body, p1s, p2s in per_paper:
            combined = {
                b.position: ensemble_probability(p1, p2, float(c))
                for b, p1, p2 in zip(body, p1s, p2s)
            }
            result = generate_summary(paper, lambda b: combined[b.position], budget, "ensemble", cfg)
            total += result.rouge.f_score
        mean_f = total / len(per_paper)
        if mean_f > best_f + 1e-12:
            best_c, best_f = float(c), mean_f
    return best_c


# --- report assembly -----------------------------------------------------------------


@dataclass
class EvalReport:
    budget: int
    rouge_beta: float
    methods: list[MethodEvaluation]
    oracle: MethodEvaluation
    accuracies: dict[str, float]
    pearson_accuracy_rouge: float | None
    t_test_p_values: dict[str, float]

    def oracle_pct(self, method: MethodEvaluation) -> float:
        return 100.0 * method.mean_f / self.oracle.mean_f if self.oracle.mean_f > 0 else 0.0

    def to_json_dict(self) -> dict:
        return {
            "k": self.budget,
            "rouge_beta": self.rouge_beta,
            "oracle_mean_f": self.oracle.mean_f,
            "methods": [
                {
                    "method": m.method,
                    "mean_f": m.mean_f,
                    "mean_precision": m.mean_precision,
                    "mean_recall": m.mean_recall,
                    "oracle_pct": self.oracle_pct(m),
                    "accuracy": self.accuracies.get(m.method),
                }
                for m in self.methods
            ],
            "pearson_accuracy_rouge": self.pearson_accuracy_rouge,
            "t_test_p_values": self.t_test_p_values,
        }


def build_report(
    methods: list[MethodEvaluation],
    oracle: MethodEvaluation,
    budget: int,
    rouge_beta: float,
    accuracies: dict[str, float] | None = None,
) -> EvalReport:
    accuracies = accuracies or {}
    pearson = None
    with_acc = [m for m in methods if m.method in accuracies]
    if len(with_acc) >= 3:
        try:
            pearson = pearson_r([accuracies[m.method] for m in with_acc], [m.mean_f for m in with_acc])
        except ValueError:
            pearson = None
    p_values: dict[str, float] = {}
    for i, m1 in enumerate(methods):
        for m2 in methods[i + 1 :]:
            p_values[f"{m1.method}|{m2.method}"] = unpaired_t_test(m1.f_scores, m2.f_scores)
    return EvalReport(budget, rouge_beta, methods, oracle, accuracies, pearson, p_values)


def write_per_paper_csv(report: EvalReport, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["paper_id", "method", "k", "precision", "recall", "f_score"])
        for method in [*report.methods, report.oracle]:
            for r in method.results:
                writer.writerow(
                    [r.paper_id, method.method, r.budget, r.rouge.precision, r.rouge.recall, r.rouge.f_score]
                )


def write_section_rouge_csv(analysis: dict[str, SectionRouge], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["category", "mean_rouge_l_f", "sentence_count"])
        for label in sorted(analysis, key=lambda l: -analysis[l].mean_f):
            writer.writerow([label, analysis[label].mean_f, analysis[label].sentence_count])


def write_copy_paste_csv(result: CopyPasteResult, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["category", "copied_highlights", "share"])
        for label in sorted(result.raw_counts, key=lambda l: -result.raw_counts[l]):
            share = result.shares[label] if result.shares else ""
            writer.writerow([label, result.raw_counts[label], share])
