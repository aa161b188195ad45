"""End-to-end linking: segment, retrieve, featurize, score, filter."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .embeddings import EmbeddingTable, SimilarityMode, load_embeddings
from .errors import CorruptModel
from .evaluation import LinkAnnotation
from .features import LinkContext
from .filtering import FilterParams, ScoredCandidate, filter_by_mention, rule_filter
from .io import format_links, read_queries
from .kb import build_alias_dictionary, load_kb
from .modelio import load_model
from .scoring import ModelBundle

logger = logging.getLogger(__name__)


@dataclass
class Linker:
    ctx: LinkContext
    model: ModelBundle
    params: FilterParams = FilterParams()

    def score_query(self, query: str) -> list[ScoredCandidate]:
        featurized = self.ctx.featurize(query)
        if not featurized:
            return []
        X = np.array([fv for _, fv in featurized], dtype=np.float64)
        scores = np.atleast_1d(self.model.score(X))
        return [ScoredCandidate(ref, float(s)) for (ref, _), s in zip(featurized, scores)]

    def link_spans(self, query: str) -> list[ScoredCandidate]:
        """Final candidates with their mention spans, in output order."""
        kept = filter_by_mention(self.score_query(query), self.params)
        return rule_filter(query, kept, self.ctx.kb)

    def link(self, query_id: str, query: str) -> list[LinkAnnotation]:
        if not query.strip():
            return []
        out: list[LinkAnnotation] = []
        seen = set()
        for sc in self.link_spans(query):
            ann = LinkAnnotation(query_id, sc.mention.surface, sc.entity_id)
            if ann not in seen:
                seen.add(ann)
                out.append(ann)
        return out

    def link_all(self, queries: Iterable[tuple[str, str]], workers: int = 1) -> list[LinkAnnotation]:
        """Link a batch; output is sorted by query id and does not depend on
        ``workers``."""
        queries = list(queries)
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(lambda q: self.link(*q), queries))
        else:
            results = [self.link(qid, text) for qid, text in queries]
        order = sorted(range(len(queries)), key=lambda i: queries[i][0])
        return [ann for i in order for ann in results[i]]


def load_context(kb_path, embeddings_path=None, *, mode=None, fuzzy_threshold=None, max_hits=None) -> LinkContext:
    kb = load_kb(kb_path)
    table = load_embeddings(embeddings_path) if embeddings_path else EmbeddingTable.empty()
    ctx = LinkContext(kb, build_alias_dictionary(kb), table)
    if mode is not None:
        ctx.mode = SimilarityMode(mode)
    if fuzzy_threshold is not None:
        ctx.fuzzy_threshold = fuzzy_threshold
    if max_hits is not None:
        ctx.max_hits = max_hits
    return ctx


def run_link(
    kb_path,
    embeddings_path,
    model_path,
    queries_path,
    params: FilterParams = FilterParams(),
    *,
    mode=None,
    fuzzy_threshold=None,
    max_hits=None,
    workers: int = 1,
) -> str:
    """Link every query in ``queries_path``; returns the output TSV text."""
    ctx = load_context(kb_path, embeddings_path, mode=mode, fuzzy_threshold=fuzzy_threshold, max_hits=max_hits)
    model = load_model(model_path)
    if not isinstance(model, ModelBundle):
        raise CorruptModel(f"{model_path}: expected a model bundle with both SVR and MART sections")
    queries = read_queries(queries_path)
    links = Linker(ctx, model, params).link_all(queries, workers=workers)
    logger.info("linked %d queries -> %d links", len(queries), len(links))
    return format_links(links)
