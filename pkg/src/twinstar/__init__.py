"""Cycle-free edge partitions of complete graphs K_{2d}.

Core objects: partitions of the d(2d-1) edges into d forest classes, the
unique triple involution on them, the vertex/color symmetry action, orbit
searches, constructive reductions of a class to a path or a twin-star, and an
exact determinant-like multilinear form whose expansion runs over these
partitions.
"""

from .edges import edge_decode, edge_encode
from .partition import (
    Partition,
    act,
    apply_word,
    involution,
    is_cycle_free,
    is_forest,
    reference_partition,
)

__all__ = [
    "Partition",
    "act",
    "apply_word",
    "edge_decode",
    "edge_encode",
    "involution",
    "is_cycle_free",
    "is_forest",
    "reference_partition",
]

__version__ = "0.1.0"
