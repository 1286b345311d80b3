"""Exact stationary states of the inhomogeneous multi-species TASEP on a ring."""
