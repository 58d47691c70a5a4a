"""Budget-capped clustering of the asset universe.

Louvain community detection runs on the structured correlation component
(absolute values, zero diagonal).  Communities that fit the qubit budget are
kept unchanged; oversized ones are split by a correlation-guided greedy loop
that repeatedly seeds a cluster at the highest-degree remaining asset and
fills it with the most similar assets, always on the *full* correlation
matrix.  All argmax/top-k ties break toward the lowest asset index.
"""

from __future__ import annotations

from dataclasses import dataclass

import networkx as nx
import numpy as np

from .errors import DataError
from .spectral import SpectralSplit, mp_split

_EDGE_TOL = 1e-12

KEPT = "kept-community"
SPLIT = "greedy-split"


@dataclass(frozen=True)
class Partition:
    """Disjoint clusters covering all assets, each of size <= q_max."""

    clusters: list[list[int]]
    q_max: int
    source: list[str]

    @property
    def n_assets(self) -> int:
        return sum(len(c) for c in self.clusters)

    def sizes(self) -> list[int]:
        return [len(c) for c in self.clusters]


def check_partition(clusters: list[list[int]], n: int, q_max: int) -> None:
    """Raise DataError unless clusters form a complete disjoint partition of
    range(n) with every size <= q_max."""
    seen: set[int] = set()
    for c in clusters:
        if len(c) == 0:
            raise DataError("empty cluster")
        if len(c) > q_max:
            raise DataError(f"cluster size {len(c)} exceeds budget {q_max}")
        for i in c:
            if i in seen:
                raise DataError(f"asset {i} appears in more than one cluster")
            seen.add(i)
    if seen != set(range(n)):
        raise DataError("clusters do not cover the asset universe")


def detect_communities(
    c_star: np.ndarray, resolution: float = 1.0, seed: int = 0
) -> list[list[int]]:
    """Louvain partition of the graph weighted by |c_star| (zero diagonal).

    Entries below 1e-12 are treated as absent edges, so assets with a
    numerically zero row come back as singletons.  Deterministic for a fixed
    seed; members sorted ascending, communities ordered by smallest member.
    """
    c_star = np.asarray(c_star, dtype=float)
    n = c_star.shape[0]
    if c_star.ndim != 2 or c_star.shape[1] != n:
        raise DataError("c_star must be square")
    if not np.allclose(c_star, c_star.T, atol=1e-8):
        raise DataError("c_star must be symmetric")

    g = nx.Graph()
    g.add_nodes_from(range(n))
    weights = 0.5 * (np.abs(c_star) + np.abs(c_star).T)
    for i in range(n):
        for j in range(i + 1, n):
            if weights[i, j] > _EDGE_TOL:
                g.add_edge(i, j, weight=float(weights[i, j]))
    comms = nx.community.louvain_communities(
        g, weight="weight", resolution=resolution, seed=int(seed)
    )
    out = sorted((sorted(c) for c in comms), key=lambda c: c[0])
    return [list(c) for c in out]


def _greedy_split(corr_abs: np.ndarray, members: list[int], q_max: int) -> list[list[int]]:
    remaining = sorted(members)
    pieces: list[list[int]] = []
    while remaining:
        if len(remaining) <= q_max:
            pieces.append(list(remaining))
            break
        sub = corr_abs[np.ix_(remaining, remaining)]
        degrees = sub.sum(axis=1) - 1.0
        seed_pos = int(np.argmax(degrees))  # first max = lowest asset index
        sims = sub[seed_pos]
        order = np.lexsort((np.array(remaining), -sims))
        chosen = sorted(remaining[p] for p in order[:q_max])
        pieces.append(chosen)
        chosen_set = set(chosen)
        remaining = [i for i in remaining if i not in chosen_set]
    return pieces


def get_clusters(
    corr: np.ndarray,
    t_obs: int,
    q_max: int,
    resolution: float = 1.0,
    seed: int = 0,
    split: SpectralSplit | None = None,
) -> Partition:
    """Full budget-capped clustering: spectral split, community detection on
    the structured component, then greedy splitting of oversized communities.

    ``split`` may carry a precomputed spectral decomposition of ``corr``.
    """
    corr = np.asarray(corr, dtype=float)
    n = corr.shape[0]
    if not 1 <= q_max <= n:
        raise DataError(f"q_max must be in [1, {n}], got {q_max}")
    if split is None:
        split = mp_split(corr, t_obs)
    communities = detect_communities(split.c_star, resolution=resolution, seed=seed)

    corr_abs = np.abs(corr)
    clusters: list[list[int]] = []
    source: list[str] = []
    for comm in communities:
        if len(comm) <= q_max:
            clusters.append(list(comm))
            source.append(KEPT)
        else:
            for piece in _greedy_split(corr_abs, comm, q_max):
                clusters.append(piece)
                source.append(SPLIT)
    check_partition(clusters, n, q_max)
    return Partition(clusters, q_max, source)
