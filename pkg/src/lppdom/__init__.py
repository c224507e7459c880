"""Directed last passage percolation on Z_+^2: low-optimal paths, percolation
subtrees, configuration surgery and pathwise domination audits."""

__version__ = "0.1.0"
