"""Exact syzygy computations for Veronese embeddings of projective space.

The package computes graded Betti numbers (dimensions of Koszul cohomology
groups K_{p,q}) of the image of P^n under the complete linear system O(d),
twisted by O(b).  Everything is exact: matrices are built over the integers,
ranks are taken over prime fields with multi-prime certification or over the
rationals outright, and the combinatorial side (weight spaces, Schur
multiplicities, closed-form bound evaluation) is integer arithmetic.
"""

__version__ = "0.1.0"

ENGINE_VERSION = __version__
SCHEMA = "syzygy-lab/1"
