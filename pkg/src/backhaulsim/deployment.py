"""SBS placement on the macro-cell disc and the distance-limited link graph.

Positions are sampled either from a Poisson point process (count ~
Poisson(expected), points uniform on the disc) or with a fixed count.
Uniformity on the disc uses the inverse-CDF radius r = R*sqrt(u), which is
exact (no rejection). Two SBSs are linked iff their Euclidean distance is
less than or equal to the hop range; the threshold is inclusive.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError
from .seeding import derive_rng

__all__ = [
    "Deployment",
    "LinkGraph",
    "sample_deployment",
    "sample_deployment_fixed_n",
    "build_link_graph",
    "write_deployment_csv",
]


@dataclass(eq=False)
class Deployment:
    """SBS coordinates in meters, origin at the macro-cell center."""

    radius_m: float
    xy: np.ndarray  # shape (n, 2)

    @property
    def n(self) -> int:
        return self.xy.shape[0]

    def __post_init__(self):
        self.xy = np.asarray(self.xy, dtype=float).reshape(-1, 2)
        if not np.all(np.isfinite(self.xy)):
            raise ConfigurationError("deployment coordinates must be finite")
        r2 = np.einsum("ij,ij->i", self.xy, self.xy)
        if np.any(r2 > self.radius_m**2 * (1 + 1e-12)):
            raise ConfigurationError("deployment has points outside the macro cell")


@dataclass(eq=False)
class LinkGraph:
    """Undirected feasible-link graph.

    ``edges`` holds node-index pairs with i < j, sorted lexicographically, so
    edge ids are canonical for a given deployment. ``capacities_bps`` is
    filled in once channels are sampled.
    """

    n: int
    edges: np.ndarray  # shape (m, 2), int64
    lengths_m: np.ndarray  # shape (m,)
    capacities_bps: np.ndarray | None = None
    _csr: tuple | None = field(default=None, repr=False)

    @property
    def m(self) -> int:
        return self.edges.shape[0]

    def csr(self):
        """(indptr, neighbor indices, incident edge ids) adjacency arrays."""
        if self._csr is None:
            u = np.concatenate([self.edges[:, 0], self.edges[:, 1]])
            v = np.concatenate([self.edges[:, 1], self.edges[:, 0]])
            eid = np.tile(np.arange(self.m, dtype=np.int64), 2)
            order = np.lexsort((v, u))
            u, v, eid = u[order], v[order], eid[order]
            indptr = np.zeros(self.n + 1, dtype=np.int64)
            np.add.at(indptr, u + 1, 1)
            np.cumsum(indptr, out=indptr)
            self._csr = (indptr, v, eid)
        return self._csr

    def neighbors(self, node: int) -> np.ndarray:
        indptr, indices, _ = self.csr()
        return indices[indptr[node] : indptr[node + 1]]


def _uniform_disc(rng: np.random.Generator, radius_m: float, n: int) -> np.ndarray:
    r = radius_m * np.sqrt(rng.random(n))
    theta = 2 * np.pi * rng.random(n)
    return np.column_stack([r * np.cos(theta), r * np.sin(theta)])


def sample_deployment(config, seed: int) -> Deployment:
    """Poisson deployment: count ~ Poisson(config.expected_count), uniform points."""
    if config.radius_m <= 0:
        raise ConfigurationError("radius_m must be positive")
    if config.expected_count is None:
        raise ConfigurationError("sample_deployment needs expected_count; "
                                 "use sample_deployment_fixed_n for a fixed count")
    if config.expected_count < 0:
        raise ConfigurationError("expected_count must be nonnegative")
    rng = derive_rng(seed, "deployment")
    n = int(rng.poisson(config.expected_count))
    return Deployment(config.radius_m, _uniform_disc(rng, config.radius_m, n))


def sample_deployment_fixed_n(config, n: int, seed: int) -> Deployment:
    """Exactly ``n`` i.i.d. uniform points on the disc."""
    if n < 0:
        raise ConfigurationError("count must be nonnegative")
    rng = derive_rng(seed, "deployment")
    return Deployment(config.radius_m, _uniform_disc(rng, config.radius_m, int(n)))


def build_link_graph(dep: Deployment, hop_range_m: float) -> LinkGraph:
    """All node pairs within ``hop_range_m`` (inclusive) become undirected edges."""
    if hop_range_m <= 0:
        raise ConfigurationError("hop_range_m must be positive")
    n = dep.n
    if n < 2:
        return LinkGraph(n, np.empty((0, 2), dtype=np.int64), np.empty(0))
    diff = dep.xy[:, None, :] - dep.xy[None, :, :]
    dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    iu, ju = np.triu_indices(n, k=1)
    keep = dist[iu, ju] <= hop_range_m
    edges = np.column_stack([iu[keep], ju[keep]]).astype(np.int64)
    return LinkGraph(n, edges, dist[iu[keep], ju[keep]])


def write_deployment_csv(dep: Deployment, fh):
    writer = csv.writer(fh)
    writer.writerow(["node_id", "x_m", "y_m"])
    for i, (x, y) in enumerate(dep.xy):
        writer.writerow([i, repr(float(x)), repr(float(y))])
