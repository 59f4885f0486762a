"""Shared fixtures: seeded generators and small graph corpora."""

from typing import List

import numpy as np
import pytest

from ngspread.core.graph import Graph, complete_split, pendant_clique, random_graph


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def graph_corpus() -> List[Graph]:
    """Forty seeded G(n, p) graphs with 2 <= n <= 9 and mixed densities."""
    graphs = []
    for seed in range(40):
        n = 2 + seed % 8
        p = (0.2, 0.5, 0.8)[seed % 3]
        graphs.append(random_graph(n, p, seed))
    return graphs


@pytest.fixture
def cs62() -> Graph:
    return complete_split(6, 2)


@pytest.fixture
def k5_plus() -> Graph:
    return pendant_clique(6)
