"""TSV readers and writers for queries, labeled queries and links."""

from __future__ import annotations

from collections import OrderedDict
from pathlib import Path
from typing import Iterable, Iterator

from .errors import MalformedLine
from .evaluation import LinkAnnotation
from .scoring import LabeledQuery


def _rows(path, n_fields: int) -> Iterator[tuple[int, list[str]]]:
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.rstrip("\r\n")
            if not line.strip() or line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != n_fields or not all(f.strip() for f in fields):
                raise MalformedLine(line_no, f"expected {n_fields} non-empty tab-separated fields", path=path)
            yield line_no, fields


def read_queries(path) -> list[tuple[str, str]]:
    """``query_id<TAB>query_text`` rows."""
    return [(f[0].strip(), f[1]) for _, f in _rows(path, 2)]


def read_links(path) -> list[LinkAnnotation]:
    """``query_id<TAB>mention<TAB>entity_id`` rows (gold or predicted)."""
    return [LinkAnnotation(f[0].strip(), f[1], f[2].strip()) for _, f in _rows(path, 3)]


def read_labeled(path) -> list[LabeledQuery]:
    """``query_id<TAB>query<TAB>gold_entity_id`` rows, one per gold link,
    grouped by query id in first-seen order."""
    texts: OrderedDict[str, str] = OrderedDict()
    gold: dict[str, set[str]] = {}
    for line_no, (qid, text, eid) in _rows(path, 3):
        qid = qid.strip()
        if qid in texts and texts[qid] != text:
            raise MalformedLine(line_no, f"query {qid!r} has conflicting texts", path=path)
        texts.setdefault(qid, text)
        gold.setdefault(qid, set()).add(eid.strip())
    return [LabeledQuery(qid, text, frozenset(gold[qid])) for qid, text in texts.items()]


def format_links(links: Iterable[LinkAnnotation]) -> str:
    return "".join(f"{a.query_id}\t{a.mention}\t{a.entity_id}\n" for a in links)


def write_links(path, links: Iterable[LinkAnnotation]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_links(links))
