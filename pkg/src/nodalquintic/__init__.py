"""Exact verification toolkit for nodal quintic surfaces over p-adic fields."""

__version__ = "0.1.0"
