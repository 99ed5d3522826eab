"""Statute co-citation network analysis for court-judgment corpora."""
from .affiliation import AffiliationMatrix, build_affiliation, provision_frequency
from .corpus import (
    Catalog,
    Corpus,
    CorpusError,
    Judgment,
    Procedure,
    ProvisionRef,
    Status,
    UnknownCaseError,
    corpus_stats,
    dedupe,
    extract_citations,
    load_catalog,
    parse_corpus,
    read_corpus,
)
from .graph import (
    CoCitationGraph,
    ComponentPartition,
    connected_components,
    exclude,
    isolate_outliers,
    project,
)
from .metrics import betweenness, cronbach, degree, density, metrics_table, size
from .retrieval import InType, Outlier, build_index, classify_case, similar_cases

__version__ = "0.1.0"
