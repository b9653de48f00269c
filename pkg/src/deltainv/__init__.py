"""Exact computer algebra for p-derivations, symmetric-matrix invariants,
and truncated p-adic expansion engines."""

__version__ = "0.1.0"
