"""Two-phase entity recognition and linking for short Chinese search queries.

Phase one favours recall: the knowledge base is expanded into an alias
dictionary and every dictionary hit in a query (plus fuzzy look-alikes)
becomes a candidate.  Phase two favours precision: candidates are scored by
the mean of a linear SVR and a boosted tree model, cut by a cumulative score
threshold, and cleaned up with a few rules.
"""

__version__ = "0.1.0"

from .candidates import CandidateRef, Channel, candidates_for, gather, jaccard
from .embeddings import EmbeddingTable, SimilarityMode, load_embeddings, similarity2
from .errors import AkemError, DataError
from .evaluation import LinkAnnotation, MetricsReport, evaluate
from .features import FeatureVector, LinkContext, extract, feature8, similarity1
from .filtering import FilterParams, ScoredCandidate, rule_filter, statistical_filter
from .kb import (
    AliasDictionary,
    AliasEntry,
    Entity,
    KnowledgeBase,
    PlaceEntry,
    PlaceKind,
    Provenance,
    build_alias_dictionary,
    extract_nicknames,
    load_kb,
    normalize_english_name,
    place_directory,
    strip_brackets,
)
from .modelio import load_model, save_model
from .pipeline import Linker, load_context, run_link
from .scoring import (
    LabeledQuery,
    MartModel,
    MartParams,
    ModelBundle,
    SvrModel,
    SvrParams,
    TrainingExample,
    build_training_set,
    mart_predict,
    mart_train,
    score,
    svr_predict,
    svr_train,
    train_bundle,
)
from .segment import Mention, segment
