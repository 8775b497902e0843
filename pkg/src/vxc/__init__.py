"""Exact lattice Voronoi cells, their duals and small polyhedral lifts."""

__version__ = "0.1.0"
