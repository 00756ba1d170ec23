"""mzmeta: a queryable metadata registry for ML model zoos."""

__version__ = "0.1.0"
