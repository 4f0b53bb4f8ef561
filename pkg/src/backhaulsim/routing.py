"""Short-time-scale route construction over sampled link capacities.

Three algorithms build a forest of gateway-rooted trees (every SBS keeps a
single output link) and assign each SBS a backhaul rate:

* ``mcst`` grows the forest greedily from the gateway set. Each step scores
  every frontier link by the network capacity the forest would have after
  attaching it - (non-gateway count) * (total rate) / (total hops) - using a
  provisional rate limited by the per-SBS maximum, the residual capacity
  along the root path, and the gateway's remaining forwarding budget. Ties
  prefer the higher provisional rate, then the lower node index.
* ``sp_routing`` routes each SBS along the minimum total-Euclidean-length
  path to its nearest gateway (ties: hop count, then index).
* ``bf_routing`` routes along minimum hop-count paths found by
  relaxation-style label correction (ties: Euclidean length, then index).

SP and BF assign rates with the same residual-bottleneck rule as MCST,
processing SBSs in increasing label order, so the comparison between the
three is apples-to-apples. Rates are committed by decrementing residuals
along the whole root path, so per-link and per-gateway limits hold by
construction. A step where every frontier link has zero residual still
attaches a node (rate 0) and records a starvation warning, keeping the
forest spanning.
"""

from __future__ import annotations

import csv
import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from .costmodel import EvaluationReport, average_hops, weighted_capacity
from .errors import InfeasibleScenarioError

__all__ = [
    "RoutingForest",
    "mcst",
    "sp_routing",
    "bf_routing",
    "evaluate_forest",
    "validate_forest",
    "write_forest_csv",
    "FOREST_CSV_COLUMNS",
    "COMPARISON_CSV_COLUMNS",
]


@dataclass(eq=False)
class RoutingForest:
    """Gateway-rooted routing trees with per-SBS rates.

    ``parent``/``parent_edge`` are -1 for gateways; ``hops`` is 0 for
    gateways; ``root`` maps every node to its tree's gateway.
    """

    algo: str
    n: int
    gateways: tuple[int, ...]
    parent: np.ndarray
    parent_edge: np.ndarray
    hops: np.ndarray
    root: np.ndarray
    rate_bps: np.ndarray
    order: list[int]
    edge_residual_bps: np.ndarray
    gateway_load_bps: dict[int, float]
    warnings: list[str] = field(default_factory=list)
    rounds: int | None = None  # label-correction rounds (bf only)

    @property
    def non_gateways(self) -> tuple[int, ...]:
        gw = set(self.gateways)
        return tuple(i for i in range(self.n) if i not in gw)

    @property
    def tree_edges(self) -> list[tuple[int, int]]:
        return [(int(self.parent[v]), int(v)) for v in self.non_gateways]


def _check_inputs(graph, capacities, gateways):
    if capacities is None:
        capacities = graph.capacities_bps
    if capacities is None:
        raise ValueError("link capacities must be sampled before routing")
    capacities = np.asarray(capacities, dtype=float)
    if capacities.shape != (graph.m,):
        raise ValueError("capacity vector length must match the edge count")
    gateways = tuple(sorted(set(int(g) for g in gateways)))
    if not gateways:
        raise ValueError("gateway set must be non-empty")
    if gateways[0] < 0 or gateways[-1] >= graph.n:
        raise ValueError("gateway index out of range")
    return capacities, gateways


def _new_forest(algo, graph, gateways):
    n = graph.n
    parent = np.full(n, -1, dtype=np.int64)
    parent_edge = np.full(n, -1, dtype=np.int64)
    hops = np.zeros(n, dtype=np.int64)
    root = np.full(n, -1, dtype=np.int64)
    for g in gateways:
        root[g] = g
    rate = np.zeros(n, dtype=float)
    return parent, parent_edge, hops, root, rate


def _commit_rate(v, w, parent, parent_edge, residual, root, gateway_load):
    node = v
    while parent[node] != -1:
        residual[parent_edge[node]] -= w
        node = parent[node]
    gateway_load[int(root[v])] += w


def _path_bottleneck(v, parent, parent_edge, residual):
    cap = math.inf
    node = v
    while parent[node] != -1:
        cap = min(cap, residual[parent_edge[node]])
        node = parent[node]
    return cap


def mcst(graph, capacities, gateways, w_max_bps, w_self_bps, w_gateway_bps) -> RoutingForest:
    """Greedy maximum-capacity spanning forest."""
    capacities, gateways = _check_inputs(graph, capacities, gateways)
    n = graph.n
    parent, parent_edge, hops, root, rate = _new_forest("mcst", graph, gateways)
    in_tree = np.zeros(n, dtype=bool)
    in_tree[list(gateways)] = True
    residual = capacities.copy()
    gateway_load = {g: 0.0 for g in gateways}
    load_arr = np.zeros(n)
    bottleneck = np.full(n, math.inf)
    order: list[int] = []
    warnings: list[str] = []
    sum_w = 0.0
    sum_h = 0.0
    k = 0

    ea = graph.edges[:, 0]
    eb = graph.edges[:, 1]
    eid_all = np.arange(graph.m, dtype=np.int64)
    gw_budget = w_gateway_bps - w_self_bps

    while k + len(gateways) < n:
        mask_ab = in_tree[ea] & ~in_tree[eb]
        mask_ba = in_tree[eb] & ~in_tree[ea]
        u = np.concatenate([ea[mask_ab], eb[mask_ba]])
        v = np.concatenate([eb[mask_ab], ea[mask_ba]])
        eid = np.concatenate([eid_all[mask_ab], eid_all[mask_ba]])
        if u.size == 0:
            stranded = tuple(int(x) for x in np.flatnonzero(~in_tree))
            raise InfeasibleScenarioError(
                f"{len(stranded)} SBSs unreachable from every gateway",
                detail=stranded,
            )
        w_tmp = np.minimum(w_max_bps, np.minimum(residual[eid], bottleneck[u]))
        w_tmp = np.minimum(w_tmp, gw_budget - load_arr[root[u]])
        w_tmp = np.maximum(w_tmp, 0.0)
        h_tmp = hops[u] + 1
        metric = (k + 1) * (sum_w + w_tmp) / (sum_h + h_tmp)
        best = np.flatnonzero(metric == metric.max())
        if best.size > 1:
            sub = best[w_tmp[best] == w_tmp[best].max()]
            sub = sub[np.lexsort((u[sub], v[sub]))]
            pick = int(sub[0])
        else:
            pick = int(best[0])
        if float(w_tmp.max()) == 0.0:
            warnings.append(
                f"starved attach: node {int(v[pick])} joined with zero rate "
                f"(all frontier links exhausted)"
            )
        vv, uu, ee, w = int(v[pick]), int(u[pick]), int(eid[pick]), float(w_tmp[pick])
        parent[vv] = uu
        parent_edge[vv] = ee
        hops[vv] = hops[uu] + 1
        root[vv] = root[uu]
        rate[vv] = w
        in_tree[vv] = True
        order.append(vv)
        _commit_rate(vv, w, parent, parent_edge, residual, root, gateway_load)
        load_arr[root[vv]] = gateway_load[int(root[vv])]
        sum_w += w
        sum_h += hops[vv]
        k += 1
        # refresh path bottlenecks in attach (topological) order
        for x in order:
            bottleneck[x] = min(bottleneck[parent[x]], residual[parent_edge[x]])
    return RoutingForest(
        "mcst", n, gateways, parent, parent_edge, hops, root, rate,
        order, residual, gateway_load, warnings,
    )


def _assign_rates_in_order(graph, capacities, gateways, parent, parent_edge, hops,
                           root, order, w_max_bps, w_self_bps, w_gateway_bps, algo):
    residual = capacities.copy()
    gateway_load = {g: 0.0 for g in gateways}
    rate = np.zeros(graph.n)
    warnings = []
    gw_budget = w_gateway_bps - w_self_bps
    for v in order:
        cap = min(
            w_max_bps,
            _path_bottleneck(v, parent, parent_edge, residual),
            gw_budget - gateway_load[int(root[v])],
        )
        w = max(0.0, cap)
        if w == 0.0:
            warnings.append(f"starved assignment: node {v} received zero rate")
        rate[v] = w
        _commit_rate(v, w, parent, parent_edge, residual, root, gateway_load)
    return RoutingForest(
        algo, graph.n, gateways, parent, parent_edge, hops, root, rate,
        list(order), residual, gateway_load, warnings,
    )


def sp_routing(graph, capacities, gateways, w_max_bps, w_self_bps, w_gateway_bps) -> RoutingForest:
    """Minimum total-Euclidean-length paths to the nearest gateway."""
    capacities, gateways = _check_inputs(graph, capacities, gateways)
    n = graph.n
    parent, parent_edge, hops, root, _ = _new_forest("sp", graph, gateways)
    indptr, indices, eids = graph.csr()
    dist = np.full(n, math.inf)
    hop_lab = np.full(n, n + 1, dtype=np.int64)
    for g in gateways:
        dist[g] = 0.0
        hop_lab[g] = 0
    heap = [(0.0, 0, g) for g in gateways]
    heapq.heapify(heap)
    done = np.zeros(n, dtype=bool)
    while heap:
        d, h, node = heapq.heappop(heap)
        if done[node] or d > dist[node] or (d == dist[node] and h > hop_lab[node]):
            continue
        done[node] = True
        for pos in range(indptr[node], indptr[node + 1]):
            nbr = int(indices[pos])
            if done[nbr]:
                continue
            e = int(eids[pos])
            nd = d + float(graph.lengths_m[e])
            nh = h + 1
            cur = (dist[nbr], hop_lab[nbr], parent[nbr] if parent[nbr] >= 0 else n + 1)
            cand = (nd, nh, node)
            if cand < cur:
                dist[nbr] = nd
                hop_lab[nbr] = nh
                parent[nbr] = node
                parent_edge[nbr] = e
                if (nd, nh) < cur[:2]:
                    heapq.heappush(heap, (nd, nh, nbr))
    non_gw = [i for i in range(n) if i not in set(gateways)]
    unreachable = tuple(i for i in non_gw if not math.isfinite(dist[i]))
    if unreachable:
        raise InfeasibleScenarioError(
            f"{len(unreachable)} SBSs unreachable from every gateway", detail=unreachable
        )
    hops[:] = 0
    for v in non_gw:
        hops[v] = hop_lab[v]
    # resolve roots by walking parents (paths are finalized)
    for v in sorted(non_gw, key=lambda i: (dist[i], hop_lab[i], i)):
        node = v
        while parent[node] != -1:
            node = int(parent[node])
        root[v] = root[node]
    order = sorted(non_gw, key=lambda i: (dist[i], hop_lab[i], i))
    return _assign_rates_in_order(
        graph, capacities, gateways, parent, parent_edge, hops, root, order,
        w_max_bps, w_self_bps, w_gateway_bps, "sp",
    )


def bf_routing(graph, capacities, gateways, w_max_bps, w_self_bps, w_gateway_bps) -> RoutingForest:
    """Minimum hop-count paths via Bellman-Ford label correction."""
    capacities, gateways = _check_inputs(graph, capacities, gateways)
    n = graph.n
    parent, parent_edge, hops_arr, root, _ = _new_forest("bf", graph, gateways)
    hop_lab = np.full(n, np.iinfo(np.int64).max // 2, dtype=np.int64)
    dist = np.full(n, math.inf)
    for g in gateways:
        hop_lab[g] = 0
        dist[g] = 0.0
    arcs = []
    for e in range(graph.m):
        a, b = int(graph.edges[e, 0]), int(graph.edges[e, 1])
        arcs.append((a, b, e))
        arcs.append((b, a, e))
    arcs.sort()
    rounds = 0
    while True:
        changed = False
        for a, b, e in arcs:
            if not math.isfinite(dist[a]):
                continue
            cand = (hop_lab[a] + 1, dist[a] + float(graph.lengths_m[e]))
            if cand < (hop_lab[b], dist[b]):
                hop_lab[b], dist[b] = cand
                changed = True
        if not changed:
            break
        rounds += 1
        if rounds > n:
            raise RuntimeError("label correction failed to settle")  # pragma: no cover
    non_gw = [i for i in range(n) if i not in set(gateways)]
    unreachable = tuple(i for i in non_gw if not math.isfinite(dist[i]))
    if unreachable:
        raise InfeasibleScenarioError(
            f"{len(unreachable)} SBSs unreachable from every gateway", detail=unreachable
        )
    # canonical parents: lowest-index neighbor consistent with the final labels
    indptr, indices, eids = graph.csr()
    for v in non_gw:
        for pos in range(indptr[v], indptr[v + 1]):
            nbr = int(indices[pos])
            e = int(eids[pos])
            if (hop_lab[nbr] + 1, dist[nbr] + float(graph.lengths_m[e])) == (
                hop_lab[v],
                dist[v],
            ):
                parent[v] = nbr
                parent_edge[v] = e
                break
    hops_arr[:] = 0
    for v in non_gw:
        hops_arr[v] = hop_lab[v]
    for v in sorted(non_gw, key=lambda i: (hop_lab[i], dist[i], i)):
        node = v
        while parent[node] != -1:
            node = int(parent[node])
        root[v] = root[node]
    order = sorted(non_gw, key=lambda i: (hop_lab[i], dist[i], i))
    forest = _assign_rates_in_order(
        graph, capacities, gateways, parent, parent_edge, hops_arr, root, order,
        w_max_bps, w_self_bps, w_gateway_bps, "bf",
    )
    forest.rounds = rounds
    return forest


def evaluate_forest(forest: RoutingForest, cost_params, w_self_bps, w_gateway_bps,
                    w_avg_bps) -> EvaluationReport:
    """Capacity, mean transmissions and cost efficiency of a routing forest."""
    m = len(forest.gateways)
    non_gw = list(forest.non_gateways)
    if non_gw:
        rates = forest.rate_bps[non_gw]
        hops = forest.hops[non_gw]
        y = average_hops(hops)
        raw = weighted_capacity(rates, hops) + m * w_self_bps
    else:
        y = float("nan")
        raw = m * w_self_bps
    capacity = min(raw, m * w_gateway_bps)
    return EvaluationReport.build(
        m, len(non_gw), y, capacity, cost_params, w_gateway_bps, w_avg_bps
    )


def validate_forest(forest: RoutingForest, graph, capacities, w_max_bps, w_self_bps,
                    w_gateway_bps, tol: float = 1e-6) -> list[str]:
    """Structural and flow-feasibility checks; returns violation messages."""
    problems = []
    gw = set(forest.gateways)
    capacities = np.asarray(capacities, dtype=float)
    for g in gw:
        if forest.parent[g] != -1 or forest.hops[g] != 0:
            problems.append(f"gateway {g} has a parent or nonzero hops")
    edge_flow = np.zeros(graph.m)
    gw_flow = {g: 0.0 for g in gw}
    for v in forest.non_gateways:
        node, steps = v, 0
        if forest.parent[v] < 0:
            problems.append(f"node {v} has no output link")
            continue
        e = int(forest.parent_edge[v])
        pair = {int(graph.edges[e, 0]), int(graph.edges[e, 1])}
        if pair != {v, int(forest.parent[v])}:
            problems.append(f"node {v}: parent edge does not join node and parent")
        if forest.hops[v] != forest.hops[forest.parent[v]] + 1:
            problems.append(f"node {v}: hop count inconsistent with parent")
        while forest.parent[node] != -1:
            edge_flow[forest.parent_edge[node]] += forest.rate_bps[v]
            node = int(forest.parent[node])
            steps += 1
            if steps > forest.n:
                problems.append(f"cycle reached from node {v}")
                break
        else:
            if node not in gw:
                problems.append(f"node {v} roots at non-gateway {node}")
            elif node != forest.root[v]:
                problems.append(f"node {v}: recorded root differs from walk")
            else:
                gw_flow[node] += float(forest.rate_bps[v])
        if forest.rate_bps[v] > w_max_bps * (1 + tol):
            problems.append(f"node {v} rate exceeds the per-SBS maximum")
    scale = max(w_max_bps, 1.0)
    for e in range(graph.m):
        if edge_flow[e] > capacities[e] + tol * scale:
            problems.append(
                f"edge {e} carries {edge_flow[e]:.3e} bps over capacity {capacities[e]:.3e}"
            )
    for g, flow in gw_flow.items():
        if flow + w_self_bps > w_gateway_bps + tol * scale:
            problems.append(f"gateway {g} load {flow:.3e} breaks the forwarding limit")
    return problems


FOREST_CSV_COLUMNS = ["node_id", "next_hop", "hops", "rate_bps", "gateway_id"]
COMPARISON_CSV_COLUMNS = ["snr_db", "algo", "capacity_bps", "efficiency_mbps_per_eur"]


def write_forest_csv(forest: RoutingForest, fh):
    writer = csv.writer(fh)
    writer.writerow(FOREST_CSV_COLUMNS)
    for v in range(forest.n):
        writer.writerow(
            [
                v,
                int(forest.parent[v]),
                int(forest.hops[v]),
                repr(float(forest.rate_bps[v])),
                int(forest.root[v]),
            ]
        )
