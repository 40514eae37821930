"""Exact computational engine for cyclic categories, ribbon Hopf algebras,
their coends, and the associated (co)cyclic modules."""

__version__ = "0.1.0"
