"""Exact computer algebra for a family of determinantal matrix
constructions: explicit free complexes over a four-element substitution,
symbolic annihilation certificates, degreewise exactness over prime fields
or the rationals, and the resolution/Hilbert-function/duality package for a
family of monomial space curves."""

__version__ = "0.1.0"
