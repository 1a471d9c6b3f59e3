"""Document-grounded evaluation of slide decks and speaker scripts."""

from deckscore.artifact import ArtifactScorecard, ArtifactWeights, score_artifact
from deckscore.config import Config, load_config
from deckscore.deck import DeckPackage, RequirementProfile, load_package
from deckscore.delivery import DeliveryScorecard, DeliveryWeights, score_delivery
from deckscore.ingest import normalize_source, segment
from deckscore.retrieval import RetrievalParams, TreeIndex, retrieve
from deckscore.tree import ContentTree, build_tree

__version__ = "0.1.0"

__all__ = [
    "ArtifactScorecard",
    "ArtifactWeights",
    "Config",
    "ContentTree",
    "DeckPackage",
    "DeliveryScorecard",
    "DeliveryWeights",
    "RequirementProfile",
    "RetrievalParams",
    "TreeIndex",
    "build_tree",
    "load_config",
    "load_package",
    "normalize_source",
    "retrieve",
    "score_artifact",
    "score_delivery",
    "segment",
]
