"""
Alias expansion
===============

A query rarely spells an entity the way the knowledge base does.  Before
anything is linked, each canonical name is expanded into the surfaces a
user might actually type.
"""

from akem import build_alias_dictionary, load_kb, place_directory
from akem.kb import alias_entries

from _paths import PLANTED

kb = load_kb(PLANTED / "kb.tsv")
print(kb)

###############################################################################
# English names: underscores become spaces and the result is lowercased.

for eid in ("e01", "e20"):
    entity = kb[eid]
    print(entity.name, "->", sorted({a.surface for a in alias_entries(entity)}))

###############################################################################
# Bracketed names drop the qualifier, and transliterated foreign names keep
# the family name after the middle dot.

for eid in ("e03", "e04"):
    entity = kb[eid]
    print(entity.name, "->", sorted({a.surface for a in alias_entries(entity)}))

###############################################################################
# Place names lose their administrative suffix.

for entry in place_directory(kb):
    print(f"{entry.full:6s} base={entry.base} kind={entry.kind.value}")

###############################################################################
# Nicknames come from 别称 / 别名 attributes.

aliases = build_alias_dictionary(kb)
for surface in ("白马银花", "紫禁城", "苹果"):
    print(surface, "->", aliases.lookup(surface))

print(f"{len(aliases)} alias entries for {len(kb)} entities")
