"""Free vertices in 2-colorings of 4-regular 4-uniform hypergraphs.

The package builds colorings that leave one vertex uncolored while every edge
still sees both colors, via a constructive free-variable solver for sparse
NAE-3-SAT. Exhaustive oracles in :mod:`freevertex.oracle` check every output
on small inputs.
"""

from .core import (
    Clause,
    ColoringCertificate,
    Hypergraph,
    Literal,
    NaeCertificate,
    NaeInstance,
    clause,
    components,
    hypergraph_from_instance,
    instance_from_hypergraph,
    neg,
    pos,
)
from .colorer import derive_pair, lemma_two_free, solve_free_vertex, star_maps, two_color
from .errors import (
    DanglingVariable,
    FormatError,
    FreeVertexError,
    GenerationFailed,
    InternalInvariant,
    InvalidColoring,
    InvalidParams,
    NonUniformEdge,
    NotTwoColorable,
    PreconditionViolated,
    TooLarge,
)
from .nae import ReductionTrace, solve_free
from .oracle import verify_coloring_certificate, verify_nae_certificate

__version__ = "0.1.0"

__all__ = [
    "Clause",
    "ColoringCertificate",
    "DanglingVariable",
    "FormatError",
    "FreeVertexError",
    "GenerationFailed",
    "Hypergraph",
    "InternalInvariant",
    "InvalidColoring",
    "InvalidParams",
    "Literal",
    "NaeCertificate",
    "NaeInstance",
    "NonUniformEdge",
    "NotTwoColorable",
    "PreconditionViolated",
    "ReductionTrace",
    "TooLarge",
    "clause",
    "components",
    "derive_pair",
    "hypergraph_from_instance",
    "instance_from_hypergraph",
    "lemma_two_free",
    "neg",
    "pos",
    "solve_free",
    "solve_free_vertex",
    "star_maps",
    "two_color",
    "verify_coloring_certificate",
    "verify_nae_certificate",
]
