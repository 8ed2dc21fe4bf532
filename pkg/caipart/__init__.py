"""Connected-acyclic/independent vertex partitions for planar graph classes."""

__version__ = "0.1.0"
