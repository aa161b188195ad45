"""
Segmentation and candidate retrieval
====================================

Every dictionary hit in the query becomes a mention, overlapping ones
included.  Each mention then retrieves exact alias matches plus fuzzy
look-alikes ranked by character-bigram overlap.
"""

from akem import build_alias_dictionary, gather, jaccard, load_kb, segment
from akem.candidates import char_bigrams

from _paths import PLANTED

kb = load_kb(PLANTED / "kb.tsv")
aliases = build_alias_dictionary(kb)

query = "北京市朝阳区的天气"
for m in segment(query, aliases):
    print(f"[{m.start:2d},{m.end:2d}) {m.surface}")

###############################################################################
# Fuzzy matching compares bigram sets.

a, b = char_bigrams("苹果公司"), char_bigrams("苹果")
print(sorted(a), sorted(b), jaccard("苹果公司", "苹果"))

###############################################################################
# Candidates for the whole query, in retrieval order.

for ref in gather(query, kb, aliases):
    print(ref.mention.surface, ref.entity_id, kb[ref.entity_id].name,
          ref.retrieval_channel.value, ref.retrieval_rank)
