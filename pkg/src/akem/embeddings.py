"""Word vectors in the plain text format and the vector similarity used by
the embedding feature.

The file starts with a ``<vocab_count> <dimension>`` header, followed by one
``word v1 ... vD`` line per word.
"""

from __future__ import annotations

import logging
import math
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch, MalformedHeader, NonFiniteValue

logger = logging.getLogger(__name__)

MISSING_SIMILARITY = -1.0


class SimilarityMode(str, Enum):
    COSINE = "cosine"
    # dot(w, m) / (|w| + |m|), the sum-of-norms denominator
    SUM_NORM = "paper"


class EmbeddingTable:
    def __init__(self, dimension: int, vectors: dict[str, np.ndarray] | None = None):
        if dimension < 1:
            raise ValueError("dimension must be positive")
        self.dimension = dimension
        self.vectors: dict[str, np.ndarray] = {}
        for word, vec in (vectors or {}).items():
            arr = np.asarray(vec, dtype=np.float64)
            if arr.shape != (dimension,):
                raise DimensionMismatch(expected=dimension, got=arr.size)
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"non-finite vector for {word!r}")
            arr.setflags(write=False)
            self.vectors[word] = arr
        self.max_word_len = max((len(w) for w in self.vectors), default=0)

    @classmethod
    def empty(cls, dimension: int = 1) -> "EmbeddingTable":
        return cls(dimension)

    def __contains__(self, word) -> bool:
        return word in self.vectors

    def __len__(self) -> int:
        return len(self.vectors)

    def get(self, word: str) -> np.ndarray | None:
        return self.vectors.get(word)

    def embed(self, text: str) -> np.ndarray | None:
        """Vector for ``text``, or the mean of its character vectors when every
        character is in the table.  ``None`` when neither is available."""
        vec = self.vectors.get(text)
        if vec is not None:
            return vec
        if not text:
            return None
        chars = [self.vectors.get(c) for c in text]
        if any(v is None for v in chars):
            return None
        return np.mean(chars, axis=0)


def load_embeddings(path) -> EmbeddingTable:
    path = Path(path)
    vectors: dict[str, np.ndarray] = {}
    with path.open(encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise MalformedHeader(f"{path}: expected '<vocab_count> <dimension>' header")
        try:
            count, dim = int(header[0]), int(header[1])
        except ValueError:
            raise MalformedHeader(f"{path}: header fields must be integers") from None
        if dim < 1 or count < 0:
            raise MalformedHeader(f"{path}: bad header values {count} {dim}")
        for line_no, line in enumerate(fh, start=2):
            parts = line.rstrip("\r\n").split(" ")
            parts = [p for p in parts if p]
            if not parts:
                continue
            word, values = parts[0], parts[1:]
            if len(values) != dim:
                raise DimensionMismatch(line_no, expected=dim, got=len(values))
            try:
                floats = [float(v) for v in values]
            except ValueError:
                raise NonFiniteValue(line_no) from None
            if not all(math.isfinite(v) for v in floats):
                raise NonFiniteValue(line_no)
            if word not in vectors:
                vectors[word] = np.array(floats, dtype=np.float64)
    if len(vectors) != count:
        logger.warning("%s: header declares %d words, read %d distinct", path, count, len(vectors))
    return EmbeddingTable(dim, vectors)


def similarity2(w, m, mode: SimilarityMode = SimilarityMode.COSINE) -> float:
    w = np.asarray(w, dtype=np.float64)
    m = np.asarray(m, dtype=np.float64)
    if w.shape != m.shape:
        raise DimensionMismatch(expected=w.size, got=m.size)
    nw = float(np.linalg.norm(w))
    nm = float(np.linalg.norm(m))
    if nw == 0.0 or nm == 0.0:
        return MISSING_SIMILARITY
    dot = float(np.dot(w, m))
    if SimilarityMode(mode) is SimilarityMode.SUM_NORM:
        return dot / (nw + nm)
    return dot / (nw * nm)


def similarity_matrix(words: np.ndarray, mentions: np.ndarray, mode: SimilarityMode) -> np.ndarray:
    """Pairwise :func:`similarity2` between the rows of two matrices."""
    nw = np.linalg.norm(words, axis=1)[:, None]
    nm = np.linalg.norm(mentions, axis=1)[None, :]
    dots = words @ mentions.T
    denom = nw + nm if SimilarityMode(mode) is SimilarityMode.SUM_NORM else nw * nm
    with np.errstate(divide="ignore", invalid="ignore"):
        out = dots / denom
    out[(nw == 0) | (nm == 0)] = MISSING_SIMILARITY
    return out
