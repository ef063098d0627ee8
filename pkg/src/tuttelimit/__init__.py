"""Exact Tutte, matching and half-edge polynomials of small graphs, and the
Bethe-lattice limits their per-vertex roots approach on regular graphs."""

__version__ = "0.1.0"
