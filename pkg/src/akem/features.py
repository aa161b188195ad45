"""Nine features for each (mention, candidate entity) pair.

====  ==========================================================
f1    character overlap of the query and the entity description
f2    mention is all digits
f3    mention contains a digit
f4    mention is all ASCII letters
f5    mention contains an ASCII letter
f6    entity name is a substring of the query
f7    query is a substring of the entity name
f8    best embedding similarity between a description word and
      another mention of the query (-1 when nothing is embeddable)
f9    another mention of the query occurs in the description
====  ==========================================================
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .candidates import DEFAULT_FUZZY_THRESHOLD, DEFAULT_MAX_HITS, CandidateRef, candidates_for
from .embeddings import MISSING_SIMILARITY, EmbeddingTable, SimilarityMode, similarity_matrix
from .kb import AliasDictionary, Entity, KnowledgeBase
from .segment import Mention, forward_maximum_match, segment

# Joins description objects; never counted as a character.
OBJECT_SEPARATOR = "\x1f"

NUM_FEATURES = 9
FEATURE_NAMES = tuple(f"f{i}" for i in range(1, NUM_FEATURES + 1))


class FeatureVector(NamedTuple):
    f1: float
    f2: float
    f3: float
    f4: float
    f5: float
    f6: float
    f7: float
    f8: float
    f9: float

    def as_array(self) -> np.ndarray:
        return np.array(self, dtype=np.float64)


def description_text(entity: Entity) -> str:
    return OBJECT_SEPARATOR.join(entity.objects)


def similarity1(query: str, object_text: str) -> float:
    """Dice coefficient over character bags: ``2*c / (l1 + l2)``."""
    a = Counter(query)
    b = Counter(object_text)
    a.pop(OBJECT_SEPARATOR, None)
    b.pop(OBJECT_SEPARATOR, None)
    total = sum(a.values()) + sum(b.values())
    if total == 0:
        return 0.0
    shared = sum((a & b).values())
    return 2.0 * shared / total


_ALL_DIGITS = re.compile(r"[0-9]+")
_HAS_DIGIT = re.compile(r"[0-9]")
_ALL_LETTERS = re.compile(r"[A-Za-z]+")
_HAS_LETTER = re.compile(r"[A-Za-z]")
_TOKEN_SPLIT = re.compile(r"[\W_]+")


def _flag(cond) -> float:
    return 1.0 if cond else 0.0


def description_words(objects: list[str], table: EmbeddingTable) -> list[str]:
    """Words of the description: punctuation/whitespace split tokens plus the
    greedy longest-match tokens against the embedding vocabulary."""
    words: dict[str, None] = {}
    for obj in objects:
        for tok in _TOKEN_SPLIT.split(obj):
            if tok:
                words[tok] = None
        if table.max_word_len:
            for s, e in forward_maximum_match(obj, table.vectors, table.max_word_len):
                tok = obj[s:e]
                if tok.strip() and not _TOKEN_SPLIT.fullmatch(tok):
                    words[tok] = None
    return list(words)


def _others(mention_index: int, mentions: list[Mention]) -> list[Mention]:
    # Overlapping spans are alternative readings of the same text, not context.
    me = mentions[mention_index]
    return [m for k, m in enumerate(mentions) if k != mention_index and not m.overlaps(me)]


def feature8(
    mention_index: int,
    mentions: list[Mention],
    candidate_object_words: list[str],
    table: EmbeddingTable,
    mode: SimilarityMode = SimilarityMode.COSINE,
) -> float:
    others = _others(mention_index, mentions)
    if not others or not candidate_object_words:
        return MISSING_SIMILARITY
    word_vecs = [table.embed(w) for w in candidate_object_words]
    mention_vecs = [table.embed(m.surface) for m in others]
    words_ok = [v for v in word_vecs if v is not None]
    mentions_ok = [v for v in mention_vecs if v is not None]
    if not words_ok or not mentions_ok:
        return MISSING_SIMILARITY
    sims = similarity_matrix(np.array(words_ok), np.array(mentions_ok), mode)
    best = float(sims.max())
    # the sum-of-norms form is unbounded for long vectors
    return min(1.0, max(-1.0, best))


def extract(
    query: str,
    mentions: list[Mention],
    candidate: CandidateRef,
    entity: Entity,
    table: EmbeddingTable,
    mode: SimilarityMode = SimilarityMode.COSINE,
    words: list[str] | None = None,
) -> FeatureVector:
    """Feature vector for one candidate.

    ``mentions`` is the set of mentions of the query that other-mention
    features (f8, f9) draw on; the candidate's own mention must be in it.
    """
    if candidate.entity_id != entity.id:
        raise ValueError("candidate and entity disagree on the entity id")
    surface = candidate.mention.surface
    desc = description_text(entity)
    if words is None:
        words = description_words(entity.objects, table)
    try:
        index = mentions.index(candidate.mention)
    except ValueError:
        mentions = [candidate.mention, *mentions]
        index = 0
    others = _others(index, mentions)
    return FeatureVector(
        f1=similarity1(query, desc),
        f2=_flag(_ALL_DIGITS.fullmatch(surface)),
        f3=_flag(_HAS_DIGIT.search(surface)),
        f4=_flag(_ALL_LETTERS.fullmatch(surface)),
        f5=_flag(_HAS_LETTER.search(surface)),
        f6=_flag(entity.name in query),
        f7=_flag(query in entity.name),
        f8=feature8(index, mentions, words, table, mode),
        f9=_flag(any(m.surface in desc for m in others)),
    )


@dataclass
class LinkContext:
    """Everything needed to turn a query into featurized candidates."""

    kb: KnowledgeBase
    aliases: AliasDictionary
    table: EmbeddingTable = field(default_factory=EmbeddingTable.empty)
    mode: SimilarityMode = SimilarityMode.COSINE
    fuzzy_threshold: float = DEFAULT_FUZZY_THRESHOLD
    max_hits: int = DEFAULT_MAX_HITS
    _words: dict = field(default_factory=dict, init=False, repr=False)

    def entity_words(self, entity: Entity) -> list[str]:
        words = self._words.get(entity.id)
        if words is None:
            words = description_words(entity.objects, self.table)
            self._words[entity.id] = words
        return words

    def candidates(self, query: str) -> tuple[list[Mention], list[CandidateRef]]:
        """Mentions that retrieved something, and their candidates."""
        refs: list[CandidateRef] = []
        mentions: list[Mention] = []
        for mention in segment(query, self.aliases):
            found = [
                r for r in candidates_for(mention, self.aliases, self.fuzzy_threshold, self.max_hits)
                if r.entity_id in self.kb
            ]
            if found:
                mentions.append(mention)
                refs.extend(found)
        return mentions, refs

    def featurize(self, query: str) -> list[tuple[CandidateRef, FeatureVector]]:
        mentions, refs = self.candidates(query)
        out = []
        for ref in refs:
            entity = self.kb[ref.entity_id]
            fv = extract(query, mentions, ref, entity, self.table, self.mode, self.entity_words(entity))
            out.append((ref, fv))
        return out


def format_feature_row(query_id: str, ref: CandidateRef, fv: FeatureVector) -> str:
    values = "\t".join(f"{v:.9f}" for v in fv)
    return f"{query_id}\t{ref.mention.surface}\t{ref.entity_id}\t{values}"
