"""Dictionary-driven query segmentation.

Queries are short, so recall matters more than a single clean segmentation:
:func:`segment` returns the forward-maximum-matching tokens *and* every
dictionary surface found anywhere in the query, overlaps included.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Container

from .errors import EmptyQuery


@dataclass(frozen=True, order=True)
class Mention:
    surface: str
    start: int
    end: int

    def __post_init__(self):
        if not 0 <= self.start < self.end:
            raise ValueError(f"bad mention span [{self.start}, {self.end})")
        if len(self.surface) != self.end - self.start:
            raise ValueError("mention surface does not match its span")

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)

    def overlaps(self, other: "Mention") -> bool:
        return self.start < other.end and other.start < self.end


def is_ascii_alnum(ch: str) -> bool:
    return ch.isascii() and ch.isalnum()


def is_word_char(ch: str) -> bool:
    """Non-ASCII letters and ideographs; each is a token of its own."""
    return not ch.isascii() and ch.isalnum()


def _ascii_run_end(text: str, i: int) -> int:
    j = i
    while j < len(text) and is_ascii_alnum(text[j]):
        j += 1
    return j


def forward_maximum_match(text: str, words: Container[str], max_len: int) -> list[tuple[int, int]]:
    """Greedy longest-match tokenization; the returned spans tile ``text``.

    Where no dictionary word starts, a run of ASCII letters/digits is taken
    whole and anything else becomes a one-character token.
    """
    spans = []
    i, n = 0, len(text)
    while i < n:
        end = None
        for j in range(min(n, i + max_len), i, -1):
            if text[i:j] in words:
                end = j
                break
        if end is None:
            end = _ascii_run_end(text, i) if is_ascii_alnum(text[i]) else i + 1
        spans.append((i, end))
        i = end
    return spans


def all_matches(text: str, words: Container[str], max_len: int) -> list[tuple[int, int]]:
    n = len(text)
    return [
        (i, j)
        for i in range(n)
        for j in range(i + 1, min(n, i + max_len) + 1)
        if text[i:j] in words
    ]


def _is_maximal_ascii_run(text: str, start: int, end: int) -> bool:
    if not all(is_ascii_alnum(c) for c in text[start:end]):
        return False
    if start > 0 and is_ascii_alnum(text[start - 1]):
        return False
    return not (end < len(text) and is_ascii_alnum(text[end]))


def segment(query: str, aliases) -> list[Mention]:
    """Candidate mentions of ``query`` sorted by start, longest first."""
    if not query.strip():
        raise EmptyQuery("query is empty")
    max_len = aliases.max_surface_len
    spans = set(all_matches(query, aliases, max_len))
    for start, end in forward_maximum_match(query, aliases, max_len):
        piece = query[start:end]
        if piece in aliases:
            spans.add((start, end))
        elif end - start == 1 and is_word_char(piece):
            spans.add((start, end))
        elif _is_maximal_ascii_run(query, start, end):
            spans.add((start, end))
    ordered = sorted(spans, key=lambda s: (s[0], s[0] - s[1]))
    return [Mention(query[s:e], s, e) for s, e in ordered]
