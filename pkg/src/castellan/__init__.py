"""Castling transformations on integer tuples and exact connection checks on sl(m)."""

from .core import (
    APPEND,
    CastlingMove,
    CastlingParams,
    ReductionTrace,
    canonicalize,
    castle,
    inverse,
    neighbors,
    reduce_to_root,
    residual,
)
from .search import SearchBox, SearchReport, classify_partition, search
from .tree import CastlingTree, EnumerationConfig, annotate_quotients, enumerate_tree, export

__all__ = [
    "APPEND",
    "CastlingMove",
    "CastlingParams",
    "CastlingTree",
    "EnumerationConfig",
    "ReductionTrace",
    "SearchBox",
    "SearchReport",
    "annotate_quotients",
    "canonicalize",
    "castle",
    "classify_partition",
    "enumerate_tree",
    "export",
    "inverse",
    "neighbors",
    "reduce_to_root",
    "residual",
    "search",
]
