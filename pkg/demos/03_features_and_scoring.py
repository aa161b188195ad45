"""
Features and scoring
====================

Each candidate gets nine features: character overlap with the entity
description, digit and letter flags, name containment both ways, embedding
similarity to the rest of the query, and whether another mention shows up in
the description.  A linear SVR and a boosted tree ensemble each score the
vector, and their clamped outputs are averaged.
"""

import numpy as np

from akem import load_context, load_model
from akem.features import FEATURE_NAMES

from _paths import TOY

ctx = load_context(TOY / "kb.tsv", TOY / "embeddings.txt")
bundle = load_model(TOY / "model.bin")

query = "奥巴马访问北京"
rows = ctx.featurize(query)
X = np.array([fv for _, fv in rows])
scores = np.atleast_1d(bundle.score(X))

print("mention   entity  " + " ".join(f"{n:>5s}" for n in FEATURE_NAMES) + "  score")
for (ref, fv), s in zip(rows, scores):
    vals = " ".join(f"{v:5.2f}" for v in fv)
    print(f"{ref.mention.surface:8s}  {ref.entity_id:6s}  {vals}  {s:.3f}")

###############################################################################
# The two models disagree in useful ways: the SVR is a weighted sum, the trees
# can pick up interactions between flags.

svr = np.clip(bundle.svr.raw(X), 0, 1)
mart = np.clip(bundle.mart.raw(X), 0, 1)
print("svr ", np.round(svr, 3))
print("mart", np.round(mart, 3))
