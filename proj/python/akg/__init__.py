"""Python bindings for the actionable knowledge graph engine."""

from ._akg import (  # noqa: F401
    AkgError,
    ConceptLattice,
    FeatureSet,
    FuzzyContext,
    TaxonomyDictionary,
    Ticket,
    build_context,
    build_lattice,
    extract_features,
    insert_object_incremental,
    intersection_size,
    load_dataset,
    rank_concepts,
    recommend,
    relatedness,
)

__all__ = [
    "AkgError",
    "ConceptLattice",
    "FeatureSet",
    "FuzzyContext",
    "TaxonomyDictionary",
    "Ticket",
    "build_context",
    "build_lattice",
    "extract_features",
    "insert_object_incremental",
    "intersection_size",
    "load_dataset",
    "rank_concepts",
    "recommend",
    "relatedness",
]
