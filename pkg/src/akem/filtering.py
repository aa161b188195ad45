"""Precision filters applied after scoring.

:func:`statistical_filter` keeps, per mention, the shortest top-scored prefix
whose scores add up to ``alpha`` (looking at the top ``k`` only).
:func:`rule_filter` then applies four clean-up rules to the whole query.
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable

from .candidates import CandidateRef
from .features import description_text, similarity1
from .kb import KnowledgeBase
from .segment import Mention, is_word_char

DEFAULT_ALPHA = 0.3
DEFAULT_K = 3


@dataclass(frozen=True)
class ScoredCandidate:
    candidate: CandidateRef
    score: float

    @property
    def mention(self) -> Mention:
        return self.candidate.mention

    @property
    def entity_id(self) -> str:
        return self.candidate.entity_id


@dataclass(frozen=True)
class FilterParams:
    alpha: float = DEFAULT_ALPHA
    k: int = DEFAULT_K

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must be in [0, 1]")
        if self.k < 1:
            raise ValueError("k must be a positive integer")


def rank_candidates(cands: Iterable[ScoredCandidate]) -> list[ScoredCandidate]:
    return sorted(cands, key=lambda c: (-c.score, c.entity_id))


def statistical_filter(per_mention: list[ScoredCandidate], params: FilterParams = FilterParams()) -> list[ScoredCandidate]:
    """Cumulative score threshold over the top ``k`` candidates of one mention.

    Returns the shortest prefix (at least one candidate) whose score sum
    reaches ``alpha``, or nothing if even all ``k`` together fall short.
    """
    top = rank_candidates(per_mention)[: params.k]
    total = 0.0
    for i, cand in enumerate(top):
        total += cand.score
        if total >= params.alpha:
            return top[: i + 1]
    return []


def filter_by_mention(scored: Iterable[ScoredCandidate], params: FilterParams = FilterParams()) -> list[ScoredCandidate]:
    groups: dict[tuple[int, int], list[ScoredCandidate]] = defaultdict(list)
    for sc in scored:
        groups[sc.mention.span].append(sc)
    kept = []
    for span in sorted(groups):
        kept.extend(statistical_filter(groups[span], params))
    return kept


# -- rules ------------------------------------------------------------------

_ASCII_LETTER_RUN = re.compile(r"[A-Za-z]+")


def _drop_split_english(query: str, cands: list[ScoredCandidate]) -> list[ScoredCandidate]:
    """Rule 1: an English word broken into two or more linked pieces loses
    all of those pieces."""
    mentions = {sc.mention for sc in cands}
    doomed: set[Mention] = set()
    for run in _ASCII_LETTER_RUN.finditer(query):
        pieces = {
            m for m in mentions
            if run.start() <= m.start and m.end <= run.end() and (m.start, m.end) != run.span()
        }
        if len(pieces) >= 2:
            doomed |= pieces
    return [sc for sc in cands if sc.mention not in doomed]


def _drop_single_chars(cands: list[ScoredCandidate]) -> list[ScoredCandidate]:
    """Rule 2: a single CJK character is not a mention."""
    return [sc for sc in cands if not (len(sc.mention.surface) == 1 and is_word_char(sc.mention.surface))]


def _one_mention_per_entity(cands: list[ScoredCandidate], kb: KnowledgeBase) -> list[ScoredCandidate]:
    """Rule 3: when several mentions link the same entity, keep the mention
    whose surface best matches the entity description (then the longer,
    then the earlier mention)."""
    by_entity: dict[str, set[Mention]] = defaultdict(set)
    for sc in cands:
        by_entity[sc.entity_id].add(sc.mention)
    winner: dict[str, Mention] = {}
    for eid, mentions in by_entity.items():
        if len(mentions) < 2:
            continue
        entity = kb.get(eid)
        desc = description_text(entity) if entity is not None else ""
        winner[eid] = max(
            mentions,
            key=lambda m: (similarity1(m.surface, desc), len(m.surface), -m.start),
        )
    return [sc for sc in cands if sc.entity_id not in winner or winner[sc.entity_id] == sc.mention]


def _prefer_exact_name(cands: list[ScoredCandidate], kb: KnowledgeBase) -> list[ScoredCandidate]:
    """Rule 4: a mention with several candidates keeps only the one whose
    canonical name equals the mention (highest score if several do)."""
    by_mention: dict[Mention, list[ScoredCandidate]] = defaultdict(list)
    for sc in cands:
        by_mention[sc.mention].append(sc)
    out = []
    for mention, group in by_mention.items():
        if len(group) >= 2:
            exact = [sc for sc in group if (e := kb.get(sc.entity_id)) is not None and e.name == mention.surface]
            if exact:
                group = rank_candidates(exact)[:1]
        out.extend(group)
    return out


def rule_filter(query: str, kept: list[ScoredCandidate], kb: KnowledgeBase) -> list[ScoredCandidate]:
    """Apply rules 1-4 in order to the statistically filtered candidates.

    Output is sorted by mention start, then entity id (then mention end).
    """
    cands = _drop_split_english(query, list(kept))
    cands = _drop_single_chars(cands)
    cands = _one_mention_per_entity(cands, kb)
    cands = _prefer_exact_name(cands, kb)
    return sorted(cands, key=lambda sc: (sc.mention.start, sc.entity_id, sc.mention.end))
