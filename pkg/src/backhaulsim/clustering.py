"""Connection clusters: maximal sets of SBSs mutually reachable over feasible links.

A cluster is a connected component of the link graph (the incremental
merge formulation and component-finding are equivalent). Clusters are
reported in canonical order, sorted by their smallest member index, and
members are sorted ascending, so the output is deterministic under node
relabeling up to that ordering.
"""

from __future__ import annotations

import csv

import numpy as np

__all__ = ["ClusterPartition", "form_clusters", "validate_gateway_coverage",
           "write_clusters_csv"]


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:  # path compression
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


class ClusterPartition:
    """Disjoint clusters covering all nodes of the graph they were built from."""

    def __init__(self, clusters):
        self.clusters = [sorted(c) for c in clusters]
        self.clusters.sort(key=lambda c: c[0])

    @property
    def B(self) -> int:
        return len(self.clusters)

    def labels(self) -> np.ndarray:
        """cluster id per node, ids following the canonical cluster order."""
        n = sum(len(c) for c in self.clusters)
        lab = np.full(n, -1, dtype=np.int64)
        for cid, members in enumerate(self.clusters):
            lab[members] = cid
        return lab

    def cluster_of(self, node: int) -> int:
        for cid, members in enumerate(self.clusters):
            if node in members:
                return cid
        raise KeyError(node)


def form_clusters(graph) -> ClusterPartition:
    """Partition the link graph into its connected components."""
    uf = _UnionFind(graph.n)
    for a, b in graph.edges:
        uf.union(int(a), int(b))
    groups = {}
    for node in range(graph.n):
        groups.setdefault(uf.find(node), []).append(node)
    return ClusterPartition(groups.values())


def validate_gateway_coverage(partition: ClusterPartition, gateways) -> list[int]:
    """Ids of clusters that contain no gateway; empty list means ok."""
    gateways = set(int(g) for g in gateways)
    violations = []
    for cid, members in enumerate(partition.clusters):
        if not gateways.intersection(members):
            violations.append(cid)
    return violations


def write_clusters_csv(partition: ClusterPartition, fh):
    writer = csv.writer(fh)
    writer.writerow(["node_id", "cluster_id"])
    for node, cid in enumerate(partition.labels()):
        writer.writerow([node, int(cid)])
