"""
End to end on the planted corpus
================================

Train on fifteen labeled queries, link fifteen unseen ones and score the
result against the gold links.
"""

import tempfile
from pathlib import Path

from akem import FilterParams, Linker, evaluate, load_context, train_bundle
from akem.io import read_labeled, read_links, read_queries
from akem.modelio import load_model, save_model
from akem.scoring import build_training_set

from _paths import PLANTED

ctx = load_context(PLANTED / "kb.tsv", PLANTED / "embeddings.txt")

examples, coverage = build_training_set(read_labeled(PLANTED / "train.tsv"), ctx)
print(coverage.summary())
positives = sum(ex.label for ex in examples)
print(f"{len(examples)} training candidates, {positives:.0f} positive")

bundle = train_bundle(examples)

# round trip through the binary format
with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "model.bin"
    save_model(path, bundle)
    print(f"model file: {path.stat().st_size} bytes")
    bundle = load_model(path)

###############################################################################
# Link the held-out queries with the default cut (alpha 0.3, top 3).

linker = Linker(ctx, bundle, FilterParams(alpha=0.3, k=3))
links = linker.link_all(read_queries(PLANTED / "heldout_queries.tsv"))
for a in links:
    print(a.query_id, a.mention, a.entity_id, ctx.kb[a.entity_id].name)

report = evaluate(read_links(PLANTED / "heldout_gold.tsv"), links)
print(report.format())
