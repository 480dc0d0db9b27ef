"""Exact computations of Pólya groups of number fields, centred on quadratic fields."""

__version__ = "0.1.0"
