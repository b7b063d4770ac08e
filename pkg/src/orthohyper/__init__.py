"""Orthogonality hypergraphs: two-valued states, vector representations,
correlation polytopes and colorings."""

__version__ = "0.1.0"
