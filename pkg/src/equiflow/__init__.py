"""Equivariant path-field decisions on finite G-complexes."""
__version__ = "0.1.0"
