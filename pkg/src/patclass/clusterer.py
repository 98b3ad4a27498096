"""Footprint clustering: complete-linkage agglomeration over Manhattan
distance, threshold cuts, and medoid representatives.

The Manhattan distance between two footprints is the number of graphs on
which the patterns disagree, so distances and merge heights are integers.
Cutting the dendrogram at threshold t yields clusters whose maximum pairwise
footprint distance is at most t; t = 0 groups exactly the identical
footprints. Tie-breaks (merge order, medoids) are by ascending pattern id so
runs are reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .footprints import FootprintMatrix


class ClusterError(ValueError):
    pass


def manhattan_matrix(matrix: FootprintMatrix,
                     pattern_ids: Sequence[int]) -> np.ndarray:
    """Symmetric integer matrix of footprint Hamming distances."""
    ids = list(pattern_ids)
    if not ids:
        raise ClusterError("at least one pattern required")
    packed = matrix.packed[:, ids]  # (bytes, p)
    p = len(ids)
    dist = np.zeros((p, p), dtype=np.int64)
    for i in range(p):
        xor = packed[:, i:i + 1] ^ packed[:, i:]
        dist[i, i:] = np.bitwise_count(xor).sum(axis=0)
    dist = np.maximum(dist, dist.T)
    return dist


@dataclass(frozen=True)
class Dendrogram:
    """Merge list of a complete-linkage agglomeration.

    Leaves are 0..p-1 (positions in pattern_ids); merge k creates cluster
    p + k. Heights are integer Manhattan distances and non-decreasing.
    """

    merges: tuple[tuple[int, int, int, int], ...]  # (x, y, height, new_id)
    pattern_ids: tuple[int, ...]
    n_graphs: int

    @property
    def n_leaves(self) -> int:
        return len(self.pattern_ids)

    def __post_init__(self):
        if len(self.merges) != max(0, self.n_leaves - 1):
            raise ClusterError("a dendrogram over p leaves needs p-1 merges")
        heights = [h for (_x, _y, h, _n) in self.merges]
        if any(h2 < h1 for h1, h2 in zip(heights, heights[1:])):
            raise ClusterError("merge heights must be non-decreasing")


@dataclass(frozen=True)
class ClusterCut:
    """Partition of pattern ids at a distance threshold, with medoids."""

    clusters: tuple[tuple[int, ...], ...]
    threshold: int
    representatives: tuple[int, ...]

    def __post_init__(self):
        for rep, cluster in zip(self.representatives, self.clusters):
            if rep not in cluster:
                raise ClusterError("representative must belong to its cluster")


def agglomerate_complete(distances: np.ndarray,
                         pattern_ids: Sequence[int] | None = None,
                         n_graphs: int | None = None) -> Dendrogram:
    """Complete-linkage agglomeration of the given distance matrix.

    At every step the pair of clusters with minimal complete-linkage distance
    merges; ties pick the lexicographically smallest (min member id, second
    min member id) pair. Deterministic.
    """
    d = np.asarray(distances)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ClusterError("distance matrix must be square")
    p = d.shape[0]
    if pattern_ids is None:
        pattern_ids = range(p)
    ids = tuple(pattern_ids)
    if len(ids) != p:
        raise ClusterError("pattern_ids must match the matrix size")
    if n_graphs is None:
        n_graphs = int(d.max()) if p > 1 else 0

    # Working complete-linkage distance matrix over active clusters.
    work = d.astype(np.int64).copy()
    active = list(range(p))                 # row index -> active flag via set
    alive = np.ones(p, dtype=bool)
    cluster_id = list(range(p))             # row index -> current cluster id
    min_member = [ids[i] for i in range(p)]  # row index -> smallest pattern id
    merges = []
    next_id = p
    big = np.iinfo(np.int64).max

    masked = work.copy()
    np.fill_diagonal(masked, big)

    for _step in range(p - 1):
        sub = np.where(alive[:, None] & alive[None, :], masked, big)
        h = int(sub.min())
        xs, ys = np.where(sub == h)
        best = None
        for x, y in zip(xs.tolist(), ys.tolist()):
            if x >= y:
                continue
            key = tuple(sorted((min_member[x], min_member[y])))
            if best is None or key < best[0]:
                best = (key, x, y)
        _key, x, y = best
        cx, cy = sorted((cluster_id[x], cluster_id[y]))
        merges.append((cx, cy, h, next_id))
        # complete linkage update: row x absorbs y with elementwise max
        new_row = np.maximum(work[x], work[y])
        work[x, :] = new_row
        work[:, x] = new_row
        work[x, x] = 0
        masked[x, :] = new_row
        masked[:, x] = new_row
        masked[x, x] = big
        alive[y] = False
        cluster_id[x] = next_id
        min_member[x] = min(min_member[x], min_member[y])
        next_id += 1

    return Dendrogram(tuple(merges), ids, int(n_graphs))


def medoids(clusters: Sequence[Sequence[int]], distances: np.ndarray,
            pattern_ids: Sequence[int]) -> tuple[int, ...]:
    """Per cluster, the member minimizing the total distance to the others;
    ties by ascending pattern id."""
    pos = {pid: i for i, pid in enumerate(pattern_ids)}
    reps = []
    for cluster in clusters:
        rows = [pos[pid] for pid in cluster]
        sub = distances[np.ix_(rows, rows)]
        totals = sub.sum(axis=1)
        best = min(range(len(cluster)), key=lambda i: (totals[i], cluster[i]))
        reps.append(cluster[best])
    return tuple(reps)


def cut(dendrogram: Dendrogram, threshold_pct: float,
        distances: np.ndarray) -> ClusterCut:
    """Apply all merges with height <= floor(threshold_pct * n_graphs).

    threshold_pct is a fraction of the graph count (the maximal possible
    Manhattan distance); threshold 0 groups exactly the identical footprints.
    """
    if not (0.0 <= threshold_pct <= 1.0):
        raise ClusterError("threshold_pct must be in [0, 1]")
    threshold = math.floor(threshold_pct * dendrogram.n_graphs)
    p = dendrogram.n_leaves
    members: dict[int, list[int]] = {i: [dendrogram.pattern_ids[i]] for i in range(p)}
    for (x, y, h, new_id) in dendrogram.merges:
        if h > threshold:
            break
        members[new_id] = members.pop(x) + members.pop(y)
    clusters = tuple(sorted((tuple(sorted(m)) for m in members.values()),
                            key=lambda c: c[0]))
    reps = medoids(clusters, distances, dendrogram.pattern_ids)
    return ClusterCut(clusters=clusters, threshold=threshold, representatives=reps)


@dataclass(frozen=True)
class FootprintClustering:
    """Dedup-aware clustering workspace for one footprint matrix.

    Identical footprints are collapsed before agglomeration: they sit at
    distance 0, so they always merge first and never change a complete-linkage
    maximum. Cuts are expanded back to full pattern-id clusters with
    multiplicity-weighted medoids, which reproduces exactly what clustering
    the uncollapsed columns would produce at a fraction of the cost.
    """

    groups: tuple[tuple[int, ...], ...]   # identical-footprint groups
    group_reps: tuple[int, ...]           # smallest id per group
    distances: np.ndarray                 # over group representatives
    dendrogram: Dendrogram

    @staticmethod
    def build(matrix: FootprintMatrix) -> "FootprintClustering":
        from .footprints import distinct_footprint_groups
        groups = tuple(tuple(g) for g in distinct_footprint_groups(matrix))
        reps = tuple(g[0] for g in groups)
        dist = manhattan_matrix(matrix, reps)
        dendro = agglomerate_complete(dist, reps, n_graphs=matrix.n_graphs)
        return FootprintClustering(groups, reps, dist, dendro)

    def cut(self, threshold_pct: float) -> ClusterCut:
        base = cut(self.dendrogram, threshold_pct, self.distances)
        by_rep = {g[0]: g for g in self.groups}
        size = {g[0]: len(g) for g in self.groups}
        pos = {pid: i for i, pid in enumerate(self.group_reps)}
        clusters = []
        reps = []
        for cluster in base.clusters:
            members = tuple(sorted(pid for r in cluster for pid in by_rep[r]))
            best = None
            for r in cluster:
                total = sum(size[r2] * int(self.distances[pos[r], pos[r2]])
                            for r2 in cluster)
                cand = (total, by_rep[r][0])
                if best is None or cand < best:
                    best = cand
            clusters.append(members)
            reps.append(best[1])
        order = sorted(range(len(clusters)), key=lambda i: clusters[i][0])
        return ClusterCut(
            clusters=tuple(clusters[i] for i in order),
            threshold=base.threshold,
            representatives=tuple(reps[i] for i in order))


def clusters_csv(cut_result: ClusterCut) -> str:
    lines = ["cluster_id,pattern_id,is_representative"]
    for cid, cluster in enumerate(cut_result.clusters):
        rep = cut_result.representatives[cid]
        for pid in cluster:
            lines.append(f"{cid},{pid},{int(pid == rep)}")
    return "\n".join(lines) + "\n"


def dendrogram_csv(dendrogram: Dendrogram) -> str:
    lines = ["merge_index,left,right,height"]
    for i, (x, y, h, _new) in enumerate(dendrogram.merges):
        lines.append(f"{i},{x},{y},{h}")
    return "\n".join(lines) + "\n"
