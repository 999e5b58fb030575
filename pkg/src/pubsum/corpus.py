"""Paper data model, corpus file parsing, and section-heading classification.

The corpus format is JSON Lines, one paper per line:

    {"id": str, "title": str, "abstract": [str], "highlights": [str],
     "keywords": [str], "sections": [{"heading": str, "sentences": [str]}]}

Sentences arrive pre-split; this module never performs sentence boundary
detection.  Every paper must carry a non-empty title, abstract, highlight
list and keyword list, and every sentence must tokenize to at least one
token; violations are rejected with the offending paper id.
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence

_PKG_DATA = Path(__file__).parent / "data"

# Maximal runs of alphanumerics joined by internal hyphens; decimal numbers
# such as "0.93" or "3.5.2" stay single tokens so they remain parseable.
_TOKEN_RE = re.compile(r"\d+(?:\.\d+)+|[^\W_]+(?:-[^\W_]+)*", re.UNICODE)

# Leading enumeration like "3.", "3.1", "IV.", "A)" before a heading's text.
_HEADING_PREFIX_RE = re.compile(r"^\s*(?:(?:\d+(?:\.\d+)*|[ivxlcdm]+|[a-z])[.):]\s*)+", re.IGNORECASE)


def tokenize(text: str) -> list[str]:
    """Lowercase word tokens: split on anything that is not alphanumeric or
    an internal hyphen, keeping decimal numbers intact.  Deterministic;
    empty input gives an empty list."""
    return _TOKEN_RE.findall(text.lower())


class LocationCategory(enum.IntEnum):
    """Structural region of a paper a sentence belongs to."""

    HIGHLIGHT = 0
    ABSTRACT = 1
    INTRODUCTION = 2
    RESULTS_DISCUSSION_ANALYSIS = 3
    METHOD = 4
    CONCLUSION = 5
    OTHER = 6


_CATEGORY_NAMES = {
    "highlight": LocationCategory.HIGHLIGHT,
    "abstract": LocationCategory.ABSTRACT,
    "introduction": LocationCategory.INTRODUCTION,
    "resultsdiscussionanalysis": LocationCategory.RESULTS_DISCUSSION_ANALYSIS,
    "method": LocationCategory.METHOD,
    "conclusion": LocationCategory.CONCLUSION,
    "other": LocationCategory.OTHER,
}


def category_from_name(name: str) -> LocationCategory:
    key = re.sub(r"[^a-z]", "", name.lower())
    try:
        return _CATEGORY_NAMES[key]
    except KeyError:
        raise ValueError(f"unknown location category name: {name!r}") from None


@dataclass(frozen=True)
class Sentence:
    """One pre-split sentence; tokens are the deterministic tokenization of raw_text."""

    raw_text: str
    tokens: tuple[str, ...]
    index_in_section: int = 0

    @classmethod
    def from_text(cls, text: str, index_in_section: int = 0) -> "Sentence":
        return cls(raw_text=text, tokens=tuple(tokenize(text)), index_in_section=index_in_section)


@dataclass(frozen=True)
class Section:
    raw_heading: str
    category: LocationCategory
    sentences: tuple[Sentence, ...]


@dataclass(frozen=True)
class Paper:
    id: str
    title: Sentence
    abstract: tuple[Sentence, ...]
    highlights: tuple[Sentence, ...]
    keywords: tuple[str, ...]
    sections: tuple[Section, ...]


@dataclass(frozen=True)
class BodySentence:
    """A body sentence with its document position and section context.

    position is the 0-based index over all section sentences in document
    order; abstract and highlight sentences are never body sentences.
    """

    position: int
    section_index: int
    category: LocationCategory
    sentence: Sentence

    @property
    def tokens(self) -> tuple[str, ...]:
        return self.sentence.tokens


def body_sentences(paper: Paper) -> list[BodySentence]:
    """All section sentences of a paper in document order."""
    out: list[BodySentence] = []
    pos = 0
    for si, section in enumerate(paper.sections):
        for sentence in section.sentences:
            out.append(BodySentence(pos, si, section.category, sentence))
            pos += 1
    return out


class CorpusError(ValueError):
    """Malformed corpus file or a paper violating the data-model guarantees."""


# --- gazetteer -------------------------------------------------------------

# Ordered (pattern tokens, category); longest contiguous match wins, ties
# broken by file order.  Unmatched headings map to OTHER.
Gazetteer = list[tuple[tuple[str, ...], LocationCategory]]


def load_gazetteer(path: str | Path) -> Gazetteer:
    """Read a two-column TSV of (heading pattern, category name)."""
    entries: Gazetteer = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise CorpusError(f"gazetteer line {lineno}: expected 2 tab-separated columns")
            pattern = tuple(tokenize(parts[0]))
            if not pattern:
                raise CorpusError(f"gazetteer line {lineno}: empty pattern")
            entries.append((pattern, category_from_name(parts[1])))
    return entries


def default_gazetteer() -> Gazetteer:
    return load_gazetteer(_PKG_DATA / "gazetteer.tsv")


def _contains_contiguous(haystack: Sequence[str], needle: Sequence[str]) -> bool:
    n = len(needle)
    if n == 0 or n > len(haystack):
        return False
    first = needle[0]
    for i in range(len(haystack) - n + 1):
        if haystack[i] == first and tuple(haystack[i : i + n]) == tuple(needle):
            return True
    return False


def classify_heading(raw_heading: str, gazetteer: Gazetteer | None = None) -> LocationCategory:
    """Map a raw section heading to one of the 7 location categories.

    Numbering prefixes ("3.", "IV.") are trimmed before a case-insensitive
    contiguous match against the gazetteer patterns; the longest matching
    pattern wins (ties by gazetteer order).  Total: unmatched -> OTHER.
    """
    if gazetteer is None:
        gazetteer = default_gazetteer()
    stripped = _HEADING_PREFIX_RE.sub("", raw_heading)
    tokens = tokenize(stripped)
    best: LocationCategory | None = None
    best_len = 0
    for pattern, category in gazetteer:
        if len(pattern) > best_len and _contains_contiguous(tokens, pattern):
            best, best_len = category, len(pattern)
    return best if best is not None else LocationCategory.OTHER


# --- corpus I/O ------------------------------------------------------------


def _sentences_from(texts: Sequence[str], paper_id: str, field_name: str) -> tuple[Sentence, ...]:
    out = []
    for i, text in enumerate(texts):
        s = Sentence.from_text(text, index_in_section=i)
        if not s.tokens:
            raise CorpusError(f"paper {paper_id!r}: {field_name}[{i}] tokenizes to nothing: {text!r}")
        out.append(s)
    return tuple(out)


def paper_from_record(record: dict, gazetteer: Gazetteer | None = None) -> Paper:
    """Validate one corpus record and build a Paper; raises CorpusError."""
    for key in ("id", "title", "abstract", "highlights", "keywords", "sections"):
        if key not in record:
            raise CorpusError(f"missing field {key!r}")
    paper_id = record["id"]
    if not isinstance(paper_id, str) or not paper_id:
        raise CorpusError("field 'id' must be a non-empty string")
    for key in ("abstract", "highlights", "keywords"):
        if not isinstance(record[key], list) or not record[key]:
            raise CorpusError(f"paper {paper_id!r}: field {key!r} must be a non-empty list")
    title = Sentence.from_text(record["title"])
    if not title.tokens:
        raise CorpusError(f"paper {paper_id!r}: title tokenizes to nothing")
    keywords = tuple(record["keywords"])
    for kw in keywords:
        if not isinstance(kw, str) or not tokenize(kw):
            raise CorpusError(f"paper {paper_id!r}: keyword {kw!r} tokenizes to nothing")
    sections = []
    for j, sec in enumerate(record["sections"]):
        if not isinstance(sec, dict) or "heading" not in sec or "sentences" not in sec:
            raise CorpusError(f"paper {paper_id!r}: sections[{j}] needs 'heading' and 'sentences'")
        sections.append(
            Section(
                raw_heading=sec["heading"],
                category=classify_heading(sec["heading"], gazetteer),
                sentences=_sentences_from(sec["sentences"], paper_id, f"sections[{j}]"),
            )
        )
    return Paper(
        id=paper_id,
        title=title,
        abstract=_sentences_from(record["abstract"], paper_id, "abstract"),
        highlights=_sentences_from(record["highlights"], paper_id, "highlights"),
        keywords=keywords,
        sections=tuple(sections),
    )


def paper_to_record(paper: Paper) -> dict:
    return {
        "id": paper.id,
        "title": paper.title.raw_text,
        "abstract": [s.raw_text for s in paper.abstract],
        "highlights": [s.raw_text for s in paper.highlights],
        "keywords": list(paper.keywords),
        "sections": [
            {"heading": sec.raw_heading, "sentences": [s.raw_text for s in sec.sentences]}
            for sec in paper.sections
        ],
    }


def iter_corpus(path: str | Path, gazetteer: Gazetteer | None = None) -> Iterator[Paper]:
    if gazetteer is None:
        gazetteer = default_gazetteer()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"line {lineno}: invalid JSON ({exc.msg})") from exc
            try:
                yield paper_from_record(record, gazetteer)
            except CorpusError as exc:
                raise CorpusError(f"line {lineno}: {exc}") from None


def load_corpus(path: str | Path, gazetteer: Gazetteer | None = None) -> list[Paper]:
    """Load and validate a JSON Lines corpus; papers come back in file order."""
    return list(iter_corpus(path, gazetteer))


def save_corpus(papers: Iterable[Paper], path: str | Path) -> None:
    """Inverse of load_corpus: load_corpus(save_corpus(papers)) == papers."""
    with open(path, "w", encoding="utf-8") as fh:
        for paper in papers:
            fh.write(json.dumps(paper_to_record(paper), ensure_ascii=False))
            fh.write("\n")
