"""Shared helpers for the test suite."""

import numpy as np
import scipy.sparse as sp

from hotmine.graph import SimilarityGraph, SimilarityMatrix


def graph_from_dense(values, kind: str = "mixed") -> SimilarityGraph:
    """Build a graph straight from a dense symmetric array."""
    return SimilarityGraph(sp.csr_matrix(np.asarray(values, dtype=float)), kind=kind)


def random_similarity(rng: np.random.Generator, n: int, density: float = 1.0) -> SimilarityMatrix:
    """Random symmetric similarity matrix with zero diagonal."""
    vals = rng.uniform(0.0, 1.0, (n, n))
    if density < 1.0:
        vals = vals * (rng.uniform(0.0, 1.0, (n, n)) < density)
    vals = np.triu(vals, 1)
    return SimilarityMatrix(vals + vals.T)
