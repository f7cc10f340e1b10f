"""Shard intersection lattices of the classical Weyl groups A, B and D."""

from .elements import PermA, PermB, PermD, descent_count, parse_element
from .preorders import blocks_of, join_direct, leq

__all__ = ["PermA", "PermB", "PermD", "descent_count", "parse_element",
           "blocks_of", "join_direct", "leq"]
__version__ = "0.1.0"
