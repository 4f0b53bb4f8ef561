"""Long-time-scale gateway selection: how many gateways and which SBSs host them.

``know_gateway`` scores a fixed gateway set by the mean BFS hop count from
each non-gateway SBS to its nearest gateway. ``unknow_gateway`` picks a set
of a given size: a greedy phase adds the SBS whose addition minimizes that
mean, then a refinement phase tries to swap each chosen gateway against
every remaining SBS, keeping improving swaps (incumbent wins ties; further
ties break to the lowest node index). Disconnected graphs are handled by
allocating gateways to connection clusters proportionally to cluster size
(largest remainder, at least one each) and optimizing inside each cluster.

``brute_force_gateways`` is the exact reference: it scans every subset,
guarded to a million combinations, and is meant for tests and small cases.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .clustering import form_clusters
from .costmodel import EvaluationReport, simplified_capacity
from .errors import ConfigurationError, InfeasibleScenarioError

__all__ = [
    "GatewaySelection",
    "know_gateway",
    "unknow_gateway",
    "brute_force_gateways",
    "optimize_gateway_count",
    "OptimizationResult",
    "GATEWAY_CSV_COLUMNS",
]


#: running BFS invocation counter, used by complexity regression tests
bfs_calls = 0


def _bfs_hops(graph, sources) -> np.ndarray:
    """Hop distance from the nearest source per node; -1 where unreachable."""
    global bfs_calls
    bfs_calls += 1
    indptr, indices, _ = graph.csr()
    hops = np.full(graph.n, -1, dtype=np.int64)
    frontier = np.asarray(sorted(set(int(s) for s in sources)), dtype=np.int64)
    hops[frontier] = 0
    level = 0
    while frontier.size:
        starts = indptr[frontier]
        lens = indptr[frontier + 1] - starts
        total = int(lens.sum())
        if total == 0:
            break
        offsets = np.cumsum(lens) - lens
        pos = np.arange(total) + np.repeat(starts - offsets, lens)
        nbrs = indices[pos]
        fresh = nbrs[hops[nbrs] < 0]
        if fresh.size == 0:
            break
        level += 1
        hops[fresh] = level
        frontier = np.unique(fresh)
    return hops


def _bfs_hops_and_serving(graph, sources):
    """Multi-source BFS that also tracks the serving gateway per node.

    Ties (several gateways at the minimum hop distance) resolve to the lowest
    gateway index, which keeps the assignment canonical.
    """
    indptr, indices, _ = graph.csr()
    n = graph.n
    hops = np.full(n, -1, dtype=np.int64)
    serving = np.full(n, n, dtype=np.int64)
    frontier = np.asarray(sorted(set(int(s) for s in sources)), dtype=np.int64)
    hops[frontier] = 0
    serving[frontier] = frontier
    level = 0
    while frontier.size:
        starts = indptr[frontier]
        lens = indptr[frontier + 1] - starts
        total = int(lens.sum())
        if total == 0:
            break
        offsets = np.cumsum(lens) - lens
        pos = np.arange(total) + np.repeat(starts - offsets, lens)
        nbrs = indices[pos]
        src_serving = np.repeat(serving[frontier], lens)
        mask = hops[nbrs] < 0
        fresh = nbrs[mask]
        if fresh.size == 0:
            break
        level += 1
        hops[fresh] = level
        # lowest serving label among all nearest-gateway predecessors
        np.minimum.at(serving, fresh, src_serving[mask])
        frontier = np.unique(fresh)
    serving[hops < 0] = -1
    return hops, serving


@dataclass
class GatewaySelection:
    """A gateway set with its hop assignments over the whole node set."""

    gateways: tuple[int, ...]
    non_gateways: tuple[int, ...]
    y_min: float  # NaN when there are no non-gateway SBSs
    hops: np.ndarray
    serving: np.ndarray

    @property
    def m(self) -> int:
        return len(self.gateways)

    @property
    def n_served(self) -> int:
        return len(self.non_gateways)


def know_gateway(graph, gateways) -> GatewaySelection:
    """Score a fixed gateway set: min-hop assignments and their mean.

    Raises InfeasibleScenarioError when some SBS cannot reach any gateway;
    the error detail carries the unreachable node set.
    """
    gateways = tuple(sorted(set(int(g) for g in gateways)))
    if not gateways:
        raise ValueError("gateway set must be non-empty")
    if gateways[0] < 0 or gateways[-1] >= graph.n:
        raise ValueError("gateway index out of range")
    hops, serving = _bfs_hops_and_serving(graph, gateways)
    non_gateways = tuple(i for i in range(graph.n) if i not in set(gateways))
    unreachable = [i for i in non_gateways if hops[i] < 0]
    if unreachable:
        raise InfeasibleScenarioError(
            f"{len(unreachable)} SBSs unreachable from every gateway",
            detail=tuple(unreachable),
        )
    if non_gateways:
        y = float(hops[list(non_gateways)].mean())
    else:
        y = float("nan")
    return GatewaySelection(gateways, non_gateways, y, hops, serving)


def _hop_sum(graph, sources, members) -> int:
    """Total BFS hops from ``sources`` over ``members`` (all must be reachable)."""
    hops = _bfs_hops(graph, sources)
    return int(hops[members].sum())


def _greedy_cluster(graph, members, m_c: int) -> list[int]:
    """Greedy gateway additions inside one connected cluster."""
    chosen: list[int] = []
    member_arr = np.asarray(members, dtype=np.int64)
    for _ in range(m_c):
        best_node, best_sum = None, None
        for i in members:
            if i in chosen:
                continue
            rest = member_arr[~np.isin(member_arr, chosen + [i])]
            total = _hop_sum(graph, chosen + [i], rest) if rest.size else 0
            if best_sum is None or total < best_sum:
                best_node, best_sum = i, total
        chosen.append(best_node)
    return chosen


def _swap_refine_cluster(graph, members, chosen: list[int], passes: int) -> list[int]:
    """One or more swap passes; incumbent kept on ties."""
    member_arr = np.asarray(members, dtype=np.int64)
    for _ in range(passes):
        snapshot = sorted(chosen)
        for j in snapshot:
            rest_mask = ~np.isin(member_arr, chosen)
            incumbent_rest = member_arr[rest_mask]
            cur = _hop_sum(graph, chosen, incumbent_rest) if incumbent_rest.size else 0
            best_node, best_sum = j, cur
            for i in members:
                if i in chosen:
                    continue
                trial = [g for g in chosen if g != j] + [i]
                rest = member_arr[~np.isin(member_arr, trial)]
                total = _hop_sum(graph, trial, rest) if rest.size else 0
                if total < best_sum:
                    best_node, best_sum = i, total
            if best_node != j:
                chosen.remove(j)
                chosen.append(best_node)
    return chosen


def _allocate_gateways(cluster_sizes: list[int], m: int) -> list[int]:
    """Largest-remainder split of ``m`` gateways, at least one per cluster."""
    n = sum(cluster_sizes)
    quotas = [m * size / n for size in cluster_sizes]
    alloc = [int(math.floor(q)) for q in quotas]
    remainders = [q - a for q, a in zip(quotas, alloc)]
    while sum(alloc) < m:
        order = sorted(
            range(len(alloc)),
            key=lambda c: (-remainders[c], c),
        )
        for c in order:
            if alloc[c] < cluster_sizes[c]:
                alloc[c] += 1
                remainders[c] = -1.0
                break
    # every cluster needs a gateway; take extras from the smallest remainders
    while any(a == 0 for a in alloc):
        zero = min(c for c, a in enumerate(alloc) if a == 0)
        donors = [c for c, a in enumerate(alloc) if a >= 2]
        donor = min(donors, key=lambda c: (remainders[c], -c))
        alloc[donor] -= 1
        alloc[zero] = 1
    return alloc


def unknow_gateway(graph, m: int, swap_passes: int = 1) -> GatewaySelection:
    """Choose ``m`` gateway SBSs minimizing the mean hop count.

    Greedy construction followed by ``swap_passes`` rounds of pairwise swap
    refinement, run independently per connection cluster. ``m`` below the
    cluster count is infeasible (some cluster could not be served).
    """
    if not 1 <= m <= graph.n:
        raise ValueError(f"gateway count {m} outside 1..{graph.n}")
    partition = form_clusters(graph)
    if m < partition.B:
        raise InfeasibleScenarioError(
            f"{m} gateways cannot cover {partition.B} connection clusters",
            detail=tuple(range(partition.B)),
        )
    alloc = _allocate_gateways([len(c) for c in partition.clusters], m)
    chosen_all: list[int] = []
    for members, m_c in zip(partition.clusters, alloc):
        chosen = _greedy_cluster(graph, members, m_c)
        if m_c > 1:
            chosen = _swap_refine_cluster(graph, members, chosen, swap_passes)
        chosen_all.extend(chosen)
    return know_gateway(graph, chosen_all)


def brute_force_gateways(graph, m: int, limit: int = 1_000_000):
    """Exact minimizer of the mean hop count over all m-subsets (test oracle).

    Refuses when the combination count exceeds ``limit``. Returns
    (gateway tuple, best mean hop count); the lexicographically smallest
    optimal subset wins ties.
    """
    if not 1 <= m <= graph.n:
        raise ValueError(f"gateway count {m} outside 1..{graph.n}")
    n_combos = math.comb(graph.n, m)
    if n_combos > limit:
        raise ValueError(
            f"refusing exhaustive scan: C({graph.n},{m}) = {n_combos} exceeds {limit}"
        )
    best_set, best_y = None, None
    all_nodes = np.arange(graph.n)
    for combo in itertools.combinations(range(graph.n), m):
        hops = _bfs_hops(graph, combo)
        rest = np.setdiff1d(all_nodes, combo, assume_unique=True)
        if rest.size and np.any(hops[rest] < 0):
            continue
        y = float(hops[rest].mean()) if rest.size else float("nan")
        if best_y is None or (rest.size and y < best_y):
            best_set, best_y = combo, y
    if best_set is None:
        raise InfeasibleScenarioError(f"no feasible gateway set of size {m}")
    return tuple(best_set), best_y


@dataclass
class OptimizationResult:
    m_opt: int
    selection: GatewaySelection
    positions: np.ndarray  # (m_opt, 2) coordinates of the chosen gateways
    curve: list[dict]
    selections: dict[int, GatewaySelection]


GATEWAY_CSV_COLUMNS = ["M", "Y", "capacity_bps", "energy_kwh", "cost_eur",
                       "efficiency_mbps_per_eur"]


def optimize_gateway_count(dep, graph, config, swap_passes: int = 1) -> OptimizationResult:
    """Sweep the gateway count and keep the most cost-efficient choice.

    For each count the placement heuristic runs, capacity uses the uniform
    maximum SBS rate over the achieved mean hop count (capped by the joint
    gateway limit), and lifetime energies price the configuration. Counts
    below the cluster number are skipped; if none is feasible the scenario
    is infeasible.
    """
    if config.max_gateways > graph.n:
        raise ConfigurationError(
            f"max_gateways {config.max_gateways} exceeds node count {graph.n}"
        )
    partition = form_clusters(graph)
    first_m = max(1, partition.B)
    if first_m > config.max_gateways:
        raise InfeasibleScenarioError(
            f"{partition.B} clusters need more gateways than max_gateways="
            f"{config.max_gateways}"
        )
    curve = []
    selections = {}
    best = None
    for m in range(first_m, config.max_gateways + 1):
        sel = unknow_gateway(graph, m, swap_passes=swap_passes)
        n_served = sel.n_served
        raw = simplified_capacity(n_served, config.w_max_bps, sel.y_min if n_served else 1.0,
                                  m, config.w_self_bps)
        capacity = min(raw, m * config.w_gateway_bps)
        report = EvaluationReport.build(
            m, n_served, sel.y_min, capacity, config.cost,
            config.w_gateway_bps, config.w_avg_bps,
        )
        curve.append(
            {
                "M": m,
                "Y": sel.y_min,
                "capacity_bps": capacity,
                "energy_kwh": report.e_op_kwh,
                "cost_eur": report.total_cost_eur,
                "efficiency_mbps_per_eur": report.efficiency_mbps_per_eur,
            }
        )
        selections[m] = sel
        if best is None or report.efficiency_bps_per_eur > best[0]:
            best = (report.efficiency_bps_per_eur, m)
    m_opt = best[1]
    positions = dep.xy[list(selections[m_opt].gateways)]
    return OptimizationResult(m_opt, selections[m_opt], positions, curve, selections)
