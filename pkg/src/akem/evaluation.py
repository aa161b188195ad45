"""Link-level evaluation: precision, recall, Link-F1 (micro) and Average-F1
(mean of per-query F1 over queries that have gold links)."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable

from .errors import DuplicateGold


@dataclass(frozen=True, order=True)
class LinkAnnotation:
    query_id: str
    mention: str
    entity_id: str

    def __post_init__(self):
        if not (self.query_id and self.mention and self.entity_id):
            raise ValueError(f"empty field in {self!r}")


def _prf(correct: int, n_pred: int, n_gold: int) -> tuple[float, float, float]:
    if n_pred == 0 and n_gold == 0:
        return 1.0, 1.0, 1.0
    p = correct / n_pred if n_pred else 0.0
    r = correct / n_gold if n_gold else 0.0
    return p, r, f1(p, r)


def f1(p: float, r: float) -> float:
    return 0.0 if p + r == 0 else 2.0 * p * r / (p + r)


@dataclass
class MetricsReport:
    precision: float
    recall: float
    link_f1: float
    average_f1: float
    per_query: dict[str, tuple[float, float, float]] = field(default_factory=dict)
    n_gold: int = 0
    n_predicted: int = 0
    n_correct: int = 0

    def format(self) -> str:
        return "\n".join([
            f"Precision\t{self.precision:.4f}",
            f"Recall\t{self.recall:.4f}",
            f"Link-F1\t{self.link_f1:.4f}",
            f"Average-F1\t{self.average_f1:.4f}",
            f"correct/predicted/gold\t{self.n_correct}/{self.n_predicted}/{self.n_gold}",
        ])


def evaluate(gold: Iterable[LinkAnnotation], predicted: Iterable[LinkAnnotation]) -> MetricsReport:
    """Score predictions against gold by exact (query_id, mention, entity_id)
    match.  Duplicate predictions count once."""
    gold_set: set[LinkAnnotation] = set()
    for g in gold:
        if g in gold_set:
            raise DuplicateGold(g)
        gold_set.add(g)
    pred_set = set(predicted)
    correct = gold_set & pred_set
    p, r, lf1 = _prf(len(correct), len(pred_set), len(gold_set))

    counts: dict[str, list[int]] = defaultdict(lambda: [0, 0, 0])
    for a in gold_set:
        counts[a.query_id][2] += 1
    for a in pred_set:
        counts[a.query_id][1] += 1
    for a in correct:
        counts[a.query_id][0] += 1
    per_query = {qid: _prf(*c) for qid, c in sorted(counts.items())}
    gold_queries = [qid for qid, c in counts.items() if c[2] > 0]
    if gold_queries:
        avg = sum(per_query[q][2] for q in gold_queries) / len(gold_queries)
    else:
        avg = lf1
    return MetricsReport(p, r, lf1, avg, per_query, len(gold_set), len(pred_set), len(correct))
