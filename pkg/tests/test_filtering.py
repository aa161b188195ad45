import random

import pytest
from hypothesis import given, settings, strategies as st

from akem.candidates import CandidateRef, Channel
from akem.filtering import FilterParams, ScoredCandidate, rank_candidates, rule_filter, statistical_filter
from akem.kb import Entity, KnowledgeBase
from akem.segment import Mention


def sc(eid, score, surface="苹果", start=0):
    mention = Mention(surface, start, start + len(surface))
    return ScoredCandidate(CandidateRef(mention, eid, 1, Channel.EXACT), score)


def shortest_prefix_oracle(cands, alpha, k):
    """Enumerate every prefix of the top-k list; pick the shortest non-empty
    one whose sum reaches alpha."""
    top = sorted(cands, key=lambda c: (-c.score, c.entity_id))[:k]
    for n in range(1, len(top) + 1):
        if sum(c.score for c in top[:n]) >= alpha:
            return top[:n]
    return []


@pytest.mark.parametrize("scores, alpha, k, keep", [
    ([0.5, 0.3, 0.1], 0.3, 3, 1),
    ([0.2, 0.15, 0.1], 0.3, 3, 2),
    ([0.1, 0.1, 0.05], 0.3, 3, 0),
    ([0.1, 0.1, 0.1, 0.9], 0.3, 3, 1),
    ([0.1, 0.1, 0.1, 0.1], 0.35, 3, 0),
    ([], 0.3, 3, 0),
])
def test_statistical_filter_examples(scores, alpha, k, keep):
    cands = [sc(f"e{i}", s) for i, s in enumerate(scores)]
    out = statistical_filter(cands, FilterParams(alpha, k))
    assert len(out) == keep
    assert out == rank_candidates(cands)[:keep]


def test_ties_break_on_entity_id():
    out = statistical_filter([sc("e2", 0.4), sc("e1", 0.4)])
    assert [c.entity_id for c in out] == ["e1"]


def test_alpha_zero_keeps_top_one():
    cands = [sc("a", 0.0), sc("b", 0.0)]
    assert len(statistical_filter(cands, FilterParams(0.0, 3))) == 1


def test_filter_params_validation():
    assert FilterParams() == FilterParams(0.3, 3)
    with pytest.raises(ValueError):
        FilterParams(alpha=1.5)
    with pytest.raises(ValueError):
        FilterParams(k=0)


@settings(max_examples=500)
@given(
    st.lists(st.floats(0, 1), max_size=8),
    st.sampled_from([i / 10 for i in range(11)]),
    st.integers(1, 5),
)
def test_matches_oracle(scores, alpha, k):
    cands = [sc(f"e{i}", s) for i, s in enumerate(scores)]
    got = statistical_filter(cands, FilterParams(alpha, k))
    assert got == shortest_prefix_oracle(cands, alpha, k)
    assert got == rank_candidates(cands)[: len(got)]


# -- rules ------------------------------------------------------------------

KB = KnowledgeBase([
    Entity("e1", "苹果", (("类别", "水果"),)),
    Entity("e2", "苹果公司", (("类别", "科技公司"),)),
    Entity("e5", "苹果手机", (("简介", "苹果公司生产的智能手机"),)),
    Entity("e6", "的", ()),
    Entity("e7", "ipod", ()),
])


def test_rule2_single_cjk_character():
    assert rule_filter("我的苹果", [sc("e6", 0.9, "的", 1)], KB) == []


def test_rule4_identical_name():
    out = rule_filter("苹果", [sc("e1", 0.5), sc("e2", 0.6)], KB)
    assert [c.entity_id for c in out] == ["e1"]


def test_rule4_highest_scoring_exact_name():
    kb = KnowledgeBase([Entity("a", "苹果"), Entity("b", "苹果"), Entity("c", "苹果树")])
    out = rule_filter("苹果", [sc("a", 0.3), sc("b", 0.5), sc("c", 0.9)], kb)
    assert [c.entity_id for c in out] == ["b"]


def test_rule3_most_similar_mention():
    query = "苹果手机"
    out = rule_filter(query, [sc("e5", 0.7, "苹果", 0), sc("e5", 0.8, "苹果手机", 0)], KB)
    assert [(c.mention.surface, c.entity_id) for c in out] == [("苹果手机", "e5")]


def test_rule3_tie_prefers_longer_then_earlier():
    kb = KnowledgeBase([Entity("x", "X", (("p", "无关"),))])
    out = rule_filter("甲乙甲乙", [sc("x", 0.5, "甲乙", 2), sc("x", 0.5, "甲乙", 0)], kb)
    assert [(c.mention.start, c.entity_id) for c in out] == [(0, "x")]
    out = rule_filter("甲乙丙", [sc("x", 0.5, "甲乙", 0), sc("x", 0.5, "乙丙", 1), sc("x", 0.5, "甲乙丙", 0)], kb)
    assert [c.mention.surface for c in out] == ["甲乙丙"]


def test_rule1_split_english_word():
    query = "ipodnano怎么样"
    split = [sc("e7", 0.9, "ipod", 0), sc("e2", 0.9, "nano", 4)]
    assert rule_filter(query, split, KB) == []
    whole = [sc("e7", 0.9, "ipodnano", 0)]
    assert rule_filter(query, whole, KB) == whole
    lone = [sc("e7", 0.9, "ipod", 0)]
    assert rule_filter(query, lone, KB) == lone


def test_rule_order_r3_before_r4():
    # R3 moves e1 to the mention 水果苹果 first, so R4 never fires on 苹果.
    kb = KnowledgeBase([Entity("e1", "苹果", (("类别", "水果苹果"),)), Entity("e2", "苹果醋", ())])
    cands = [sc("e1", 0.6, "苹果", 2), sc("e2", 0.5, "苹果", 2), sc("e1", 0.6, "水果苹果", 0)]
    out = rule_filter("水果苹果", cands, kb)
    assert [(c.mention.surface, c.entity_id) for c in out] == [("水果苹果", "e1"), ("苹果", "e2")]


def test_output_sorted():
    kb = KnowledgeBase([Entity(e, e) for e in "abc"])
    cands = [sc("c", 0.5, "乙丙", 2), sc("b", 0.5, "甲乙", 0), sc("a", 0.5, "乙丙", 2)]
    out = rule_filter("甲乙乙丙", cands, kb)
    assert [(c.mention.start, c.entity_id) for c in out] == [(0, "b"), (2, "a"), (2, "c")]


def random_candidate_set(rng: random.Random):
    query = "".join(rng.choice("苹果手机abc的") for _ in range(rng.randint(1, 10)))
    ids = ["e1", "e2", "e5", "e6", "e7", "zz"]
    cands = []
    for _ in range(rng.randint(0, 8)):
        start = rng.randrange(len(query))
        end = rng.randint(start + 1, len(query))
        cands.append(sc(rng.choice(ids), round(rng.random(), 2), query[start:end], start))
    return query, cands


def test_rule_filter_idempotent():
    rng = random.Random(1234)
    for _ in range(1000):
        query, cands = random_candidate_set(rng)
        once = rule_filter(query, cands, KB)
        assert rule_filter(query, once, KB) == once


def test_rule4_never_adds_links():
    rng = random.Random(99)
    for _ in range(300):
        query, cands = random_candidate_set(rng)
        out = rule_filter(query, cands, KB)
        for mention in {c.mention for c in out}:
            assert sum(c.mention == mention for c in out) <= sum(c.mention == mention for c in cands)


def test_output_sorted_by_start_then_entity():
    kb = KnowledgeBase([Entity("a", "甲乙丙"), Entity("b", "甲乙")])
    cands = [sc("b", 0.5, "甲乙", 0), sc("a", 0.5, "甲乙丙", 0)]
    out = rule_filter("甲乙丙", cands, kb)
    assert [c.entity_id for c in out] == ["a", "b"]
