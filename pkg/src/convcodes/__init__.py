"""Exact invariants of convolutional codes over small finite fields.

Library layout:

* :mod:`convcodes.gf` - GF(p^m) arithmetic and field embeddings
* :mod:`convcodes.polymat` - polynomials in z, scalar and polynomial matrices
* :mod:`convcodes.code` - validated codes, invariants, lifting, file format
* :mod:`convcodes.distance` - row distances, free distance, MDS predicate
* :mod:`convcodes.cgc` - Goppa constructions on the projective line, scans
* :mod:`convcodes.extend` - MDS-preserving length extension certificates
* :mod:`convcodes.cli` - the `convcodes` command
"""

from .code import ConvCode, new_code, singleton_bound
from .distance import free_distance, free_distance_oracle, is_mds
from .gf import FieldEmbedding, FiniteField, field_new

__all__ = [
    "ConvCode",
    "FieldEmbedding",
    "FiniteField",
    "field_new",
    "free_distance",
    "free_distance_oracle",
    "is_mds",
    "new_code",
    "singleton_bound",
]

__version__ = "0.1.0"
