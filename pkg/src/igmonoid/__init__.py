"""Exact computations with monoids of IG-type.

A monoid of IG-type is ``S = {(a, phi(a)) : a in A}`` inside ``A ⋊ G`` for a
finitely generated abelian monoid ``A`` and a finite group ``G``.  The package
builds such monoids from presentations, group actions and cocycles, and
decides torsion-freeness, primes and the maximal-order property.
"""

from .errors import IGMonoidError

__version__ = "0.1.0"

__all__ = ["IGMonoidError", "__version__"]
