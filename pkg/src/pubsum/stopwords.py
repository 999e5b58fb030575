"""Bundled stopword list with optional override via PUBSUM_STOPWORDS."""

from __future__ import annotations

import os
from functools import lru_cache
from pathlib import Path

_BUNDLED = Path(__file__).parent / "data" / "stopwords.txt"

ENV_VAR = "PUBSUM_STOPWORDS"


def load_stopwords(path: str | Path) -> frozenset[str]:
    """One token per line; blank lines and '#' comments are ignored."""
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            word = line.strip()
            if word and not word.startswith("#"):
                words.add(word.lower())
    return frozenset(words)


@lru_cache(maxsize=4)
def _cached(path: str) -> frozenset[str]:
    return load_stopwords(path)


def default_stopwords() -> frozenset[str]:
    """The bundled list, unless PUBSUM_STOPWORDS points at a replacement."""
    return _cached(os.environ.get(ENV_VAR, str(_BUNDLED)))
