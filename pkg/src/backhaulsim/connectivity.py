"""Isolation and connectivity probabilities for disc deployments.

Analytic side: the probability that a single SBS has no neighbor within the
hop range is a mixture of a closed-form interior term (its range disc fits
inside the macro cell) and a numerically integrated rim term where the range
disc is clipped by the cell boundary. The no-isolated-node probability raises
(1 - p_iso) to the expected node count. Full connectivity has no closed form
and is estimated by Monte Carlo only; at high density it approaches the
non-isolation probability from below.

Conventions: an empty deployment counts as non-isolated and connected
(vacuous truth); a single lonely SBS counts as isolated, and a 1-node
network is not considered fully connected. With these conventions
"connected" implies "non-isolated" trial by trial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy import integrate

from .errors import NumericalError
from .seeding import derive_rng

__all__ = [
    "ConnectivityEstimate",
    "effective_coverage_area",
    "isolation_probability",
    "non_isolation_probability",
    "mc_connectivity",
    "connectivity_row",
    "CONNECTIVITY_CSV_COLUMNS",
]


def effective_coverage_area(r: float, radius_m: float, hop_range_m: float) -> float:
    """Area of the SBS range disc clipped to the macro cell.

    ``r`` is the SBS distance from the cell center. Continuous in ``r``; both
    branch formulas agree where the range disc becomes tangent to the boundary.
    """
    R, d0 = float(radius_m), float(hop_range_m)
    if not (R > 0 and d0 > 0):
        raise ValueError("radius and hop range must be positive")
    if r < 0 or r > R:
        raise ValueError(f"SBS offset r={r} outside [0, {R}]")
    if r + d0 <= R:
        return math.pi * d0 * d0
    if d0 >= r + R:
        return math.pi * R * R
    # circular lens: range disc of radius d0 centered at distance r, cell disc radius R
    cos_a = (r * r + d0 * d0 - R * R) / (2 * d0 * r)
    cos_b = (r * r - d0 * d0 + R * R) / (2 * R * r)
    cos_a = min(1.0, max(-1.0, cos_a))
    cos_b = min(1.0, max(-1.0, cos_b))
    kernel = (r + d0 + R) * (-r + d0 + R) * (r - d0 + R) * (r + d0 - R)
    return (
        d0 * d0 * math.acos(cos_a)
        + R * R * math.acos(cos_b)
        - 0.5 * math.sqrt(max(0.0, kernel))
    )


def isolation_probability(radius_m: float, hop_range_m: float, expected_n: float) -> float:
    """Probability that one SBS has no neighbor within the hop range.

    ``expected_n`` is the mean SBS count per macro cell; the underlying point
    density is expected_n / (pi R^2).
    """
    R, d0 = float(radius_m), float(hop_range_m)
    if not (R > 0 and d0 > 0 and expected_n > 0):
        raise ValueError("radius, hop range and expected count must be positive")
    mu = expected_n / (math.pi * R * R)
    interior = 0.0
    if d0 < R:
        interior = math.exp(-mu * math.pi * d0 * d0) * ((R - d0) / R) ** 2
    lo = max(0.0, R - d0)

    def rim_integrand(r):
        return math.exp(-mu * effective_coverage_area(r, R, d0)) * 2.0 * r / (R * R)

    result = integrate.quad(rim_integrand, lo, R, epsabs=1e-9, limit=200, full_output=1)
    if len(result) > 3:
        raise NumericalError(f"rim integral did not converge: {result[3]}")
    p = interior + result[0]
    return min(1.0, max(0.0, p))


def non_isolation_probability(radius_m: float, hop_range_m: float, expected_n: float) -> float:
    """Probability that no SBS in the cell is isolated, (1 - p_iso)^expected_n."""
    p_iso = isolation_probability(radius_m, hop_range_m, expected_n)
    return (1.0 - p_iso) ** expected_n


@dataclass
class ConnectivityEstimate:
    p_isolated: float
    p_non_isolated: float
    p_connected: float
    trials: int
    se_isolated: float
    se_non_isolated: float
    se_connected: float


@njit(cache=True)
def _mc_kernel(xs, ys, offsets, d0sq):  # pragma: no cover - exercised via wrapper
    trials = offsets.shape[0] - 1
    noniso = np.zeros(trials, np.uint8)
    conn = np.zeros(trials, np.uint8)
    iso_counts = np.zeros(trials, np.int64)
    for k in range(trials):
        s = offsets[k]
        n = offsets[k + 1] - s
        if n == 0:
            noniso[k] = 1
            conn[k] = 1
            continue
        if n == 1:
            iso_counts[k] = 1
            continue
        deg = np.zeros(n, np.int64)
        parent = np.arange(n)
        for i in range(n):
            xi = xs[s + i]
            yi = ys[s + i]
            for j in range(i + 1, n):
                dx = xs[s + j] - xi
                dy = ys[s + j] - yi
                if dx * dx + dy * dy <= d0sq:
                    deg[i] += 1
                    deg[j] += 1
                    ri = i
                    while parent[ri] != ri:
                        ri = parent[ri]
                    rj = j
                    while parent[rj] != rj:
                        rj = parent[rj]
                    if ri != rj:
                        if ri < rj:
                            parent[rj] = ri
                        else:
                            parent[ri] = rj
        iso = 0
        for i in range(n):
            if deg[i] == 0:
                iso += 1
        iso_counts[k] = iso
        if iso == 0:
            roots = 0
            for i in range(n):
                r = i
                while parent[r] != r:
                    r = parent[r]
                if r == i:
                    roots += 1
            noniso[k] = 1
            if roots == 1:
                conn[k] = 1
    return noniso, conn, iso_counts


def mc_connectivity(
    radius_m: float,
    hop_range_m: float,
    expected_n: float,
    trials: int,
    seed: int,
    chunk: int = 20000,
) -> ConnectivityEstimate:
    """Monte Carlo estimate of isolation / non-isolation / full-connectivity.

    Per trial a Poisson deployment is drawn and tested for "no node isolated"
    and "single connected component". Counters are plain sums, so results do
    not depend on accumulation order. ``chunk`` only batches the sampling;
    keep it fixed for bit-identical replays of a given seed.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = derive_rng(seed, "mc-connectivity")
    d0sq = float(hop_range_m) ** 2
    noniso_parts, conn_parts = [], []
    iso_parts, n_parts = [], []
    done = 0
    while done < trials:
        t = min(chunk, trials - done)
        counts = rng.poisson(expected_n, size=t).astype(np.int64)
        offsets = np.zeros(t + 1, dtype=np.int64)
        np.cumsum(counts, out=offsets[1:])
        total = int(offsets[-1])
        radii = radius_m * np.sqrt(rng.random(total))
        theta = 2 * np.pi * rng.random(total)
        xs = radii * np.cos(theta)
        ys = radii * np.sin(theta)
        noniso, conn, iso_counts = _mc_kernel(xs, ys, offsets, d0sq)
        noniso_parts.append(noniso)
        conn_parts.append(conn)
        iso_parts.append(iso_counts)
        n_parts.append(counts)
        done += t
    noniso = np.concatenate(noniso_parts).astype(float)
    conn = np.concatenate(conn_parts).astype(float)
    iso_counts = np.concatenate(iso_parts).astype(float)
    node_counts = np.concatenate(n_parts).astype(float)

    p_noniso = float(noniso.mean())
    p_conn = float(conn.mean())
    total_nodes = float(node_counts.sum())
    p_iso = float(iso_counts.sum() / total_nodes) if total_nodes > 0 else 0.0
    # linearized ratio-estimator standard error for the pooled isolation fraction
    if total_nodes > 0 and trials > 1:
        resid = iso_counts - p_iso * node_counts
        se_iso = float(resid.std(ddof=1) / (node_counts.mean() * math.sqrt(trials)))
    else:
        se_iso = 0.0
    se_noniso = math.sqrt(max(p_noniso * (1 - p_noniso), 0.0) / trials)
    se_conn = math.sqrt(max(p_conn * (1 - p_conn), 0.0) / trials)
    return ConnectivityEstimate(
        p_isolated=p_iso,
        p_non_isolated=p_noniso,
        p_connected=p_conn,
        trials=trials,
        se_isolated=se_iso,
        se_non_isolated=se_noniso,
        se_connected=se_conn,
    )


CONNECTIVITY_CSV_COLUMNS = [
    "mu",
    "expected_n",
    "p_iso",
    "p_noniso_analytic",
    "p_noniso_mc",
    "p_con_mc",
    "se_noniso",
    "se_con",
]


def connectivity_row(radius_m, hop_range_m, expected_n, est: ConnectivityEstimate) -> dict:
    """One CSV row combining the analytic curve with an MC estimate."""
    return {
        "mu": expected_n / (math.pi * radius_m**2),
        "expected_n": expected_n,
        "p_iso": isolation_probability(radius_m, hop_range_m, expected_n),
        "p_noniso_analytic": non_isolation_probability(radius_m, hop_range_m, expected_n),
        "p_noniso_mc": est.p_non_isolated,
        "p_con_mc": est.p_connected,
        "se_noniso": est.se_non_isolated,
        "se_con": est.se_connected,
    }
