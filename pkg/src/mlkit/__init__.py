"""Exact lattice, cyclotomic and Fuchsian-group computations for bimodal singularities."""

__version__ = "0.1.0"
