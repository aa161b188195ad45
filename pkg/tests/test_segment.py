import pytest
from hypothesis import given, settings, strategies as st

from akem.errors import EmptyQuery
from akem.segment import Mention, forward_maximum_match, is_ascii_alnum, segment

from conftest import aliases_of


def spans(mentions):
    return [(m.start, m.end, m.surface) for m in mentions]


def test_fmm_plus_all_matches():
    aliases = aliases_of({"苹果": ["e1"], "手机": ["e2"], "苹果手机": ["e3"]})
    assert spans(segment("苹果手机", aliases)) == [(0, 4, "苹果手机"), (0, 2, "苹果"), (2, 4, "手机")]


def test_fallback_tokens():
    aliases = aliases_of({})
    assert spans(segment("iphone充电", aliases)) == [(0, 6, "iphone"), (6, 7, "充"), (7, 8, "电")]


def test_letters_and_digits_form_one_run():
    assert spans(segment("买iphone6吗", aliases_of({}))) == [
        (0, 1, "买"), (1, 8, "iphone6"), (8, 9, "吗"),
    ]


def test_whitespace_and_punctuation_are_not_mentions():
    assert spans(segment("苹果，  好", aliases_of({"苹果": ["e"]}))) == [(0, 2, "苹果"), (5, 6, "好")]


@pytest.mark.parametrize("query", ["", "   ", "\t\n"])
def test_empty_query(query):
    with pytest.raises(EmptyQuery):
        segment(query, aliases_of({"a": ["e"]}))


def test_mention_validation():
    with pytest.raises(ValueError):
        Mention("ab", 0, 3)
    with pytest.raises(ValueError):
        Mention("", 1, 1)


WORDS = ["苹果", "手机", "苹果手机", "果手", "ab", "abc", "北京", "京市", "北京市", "b"]
query_chars = st.sampled_from(list("苹果手机北京市ab c，1"))


@st.composite
def dict_and_query(draw):
    words = draw(st.lists(st.sampled_from(WORDS), unique=True, max_size=len(WORDS)))
    query = draw(st.text(alphabet=query_chars, min_size=1, max_size=30))
    return aliases_of({w: ["e"] for w in words}), query


@settings(max_examples=300)
@given(dict_and_query())
def test_all_dictionary_substrings_found(case):
    aliases, query = case
    if not query.strip():
        return
    got = {(m.start, m.end) for m in segment(query, aliases)}
    brute = {(i, j) for i in range(len(query)) for j in range(i + 1, len(query) + 1) if query[i:j] in aliases}
    assert brute <= got


@settings(max_examples=300)
@given(dict_and_query())
def test_mentions_are_well_formed(case):
    aliases, query = case
    if not query.strip():
        return
    mentions = segment(query, aliases)
    assert mentions == sorted(mentions, key=lambda m: (m.start, -(m.end - m.start)))
    assert len({m.span for m in mentions}) == len(mentions)
    for m in mentions:
        assert query[m.start:m.end] == m.surface
        single_cjk = len(m.surface) == 1 and not m.surface.isascii() and m.surface.isalnum()
        maximal_run = (
            all(is_ascii_alnum(c) for c in m.surface)
            and (m.start == 0 or not is_ascii_alnum(query[m.start - 1]))
            and (m.end == len(query) or not is_ascii_alnum(query[m.end]))
        )
        assert m.surface in aliases or single_cjk or maximal_run


@settings(max_examples=300)
@given(dict_and_query())
def test_fmm_tiles_query(case):
    aliases, query = case
    tokens = forward_maximum_match(query, aliases, aliases.max_surface_len)
    pos = 0
    for s, e in tokens:
        assert s == pos and e > s
        pos = e
    assert pos == len(query)


def test_fmm_prefers_longest():
    aliases = aliases_of({"北京": ["a"], "北京市": ["b"], "市长": ["c"]})
    assert forward_maximum_match("北京市长", aliases, 3) == [(0, 3), (3, 4)]
