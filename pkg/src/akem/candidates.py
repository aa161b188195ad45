"""Candidate entity retrieval for mentions.

Exact alias hits come first.  When a mention has fewer than ``max_hits``
exact hits, the remaining slots are filled from aliases that look like the
mention (character bigram Jaccard), best first, stopping at the similarity
threshold.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .segment import Mention, segment

DEFAULT_FUZZY_THRESHOLD = 0.5
DEFAULT_MAX_HITS = 10


class Channel(str, Enum):
    EXACT = "Exact"
    FUZZY = "Fuzzy"


@dataclass(frozen=True)
class CandidateRef:
    mention: Mention
    entity_id: str
    retrieval_rank: int
    retrieval_channel: Channel


def char_bigrams(text: str) -> frozenset[str]:
    if len(text) == 1:
        return frozenset((text,))
    return frozenset(text[i:i + 2] for i in range(len(text) - 1))


def jaccard(a: str, b: str) -> float:
    """Character bigram Jaccard similarity; 0.0 when both sets are empty."""
    ga, gb = char_bigrams(a), char_bigrams(b)
    union = len(ga | gb)
    if union == 0:
        return 0.0
    return len(ga & gb) / union


def fuzzy_matches(surface: str, aliases, threshold: float) -> list[tuple[float, str]]:
    """Dictionary surfaces other than ``surface`` with similarity >= threshold.

    Sorted by descending similarity, then shorter surface, then lexicographic.
    """
    if threshold > 0:
        index = aliases.bigram_index
        pool = set()
        for gram in char_bigrams(surface):
            pool.update(index.get(gram, ()))
    else:
        pool = set(aliases.surfaces)
    pool.discard(surface)
    scored = []
    for other in pool:
        sim = jaccard(surface, other)
        if sim >= threshold:
            scored.append((sim, other))
    scored.sort(key=lambda t: (-t[0], len(t[1]), t[1]))
    return scored


def candidates_for(
    mention: Mention,
    aliases,
    fuzzy_threshold: float = DEFAULT_FUZZY_THRESHOLD,
    max_hits: int = DEFAULT_MAX_HITS,
) -> list[CandidateRef]:
    ids = list(aliases.lookup(mention.surface))[:max_hits]
    refs = [CandidateRef(mention, eid, rank, Channel.EXACT) for rank, eid in enumerate(ids, 1)]
    if len(refs) >= max_hits:
        return refs
    seen = set(ids)
    for _, other in fuzzy_matches(mention.surface, aliases, fuzzy_threshold):
        for eid in aliases.lookup(other):
            if eid in seen:
                continue
            seen.add(eid)
            refs.append(CandidateRef(mention, eid, len(refs) + 1, Channel.FUZZY))
            if len(refs) >= max_hits:
                return refs
    return refs


def gather(
    query: str,
    kb,
    aliases,
    fuzzy_threshold: float = DEFAULT_FUZZY_THRESHOLD,
    max_hits: int = DEFAULT_MAX_HITS,
    mentions: list[Mention] | None = None,
) -> list[CandidateRef]:
    """All candidates for all mentions of ``query``.

    One entry per (mention span, entity id), keeping the best rank.  Ids
    absent from ``kb`` are dropped (possible with a reloaded alias dump).
    """
    if mentions is None:
        mentions = segment(query, aliases)
    best: dict[tuple[tuple[int, int], str], CandidateRef] = {}
    for mention in mentions:
        for ref in candidates_for(mention, aliases, fuzzy_threshold, max_hits):
            if kb is not None and ref.entity_id not in kb:
                continue
            key = (mention.span, ref.entity_id)
            held = best.get(key)
            if held is None or ref.retrieval_rank < held.retrieval_rank:
                best[key] = ref
    return list(best.values())
