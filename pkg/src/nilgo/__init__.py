"""Exact-arithmetic engine for pseudo H-type Lie algebras and their
geodesic-orbit certification."""

__version__ = "0.1.0"
