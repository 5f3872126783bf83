"""Exact lattice and discriminant-form tools for lattice-polarised K3 surfaces."""

__version__ = "0.1.0"
