"""Transport capacity and cost efficiency of a gateway-served cluster.

Capacity: delivered bits per second cannot exceed the total radio rate
divided by the mean number of transmissions a bit needs (plus gateway
self-traffic), nor the joint gateway forwarding limit M * W_G.

Cost: lifetime operating energy prices the gateways at their forwarding
limit and the SBSs at their lifetime-average rate; embodied energy is a
fixed fraction of whole lifetime energy; cost efficiency divides capacity
by energy cost plus gateway deployment expense.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "EvaluationReport",
    "transport_capacity",
    "simplified_capacity",
    "average_hops",
    "weighted_capacity",
    "operation_energy",
    "embodied_energy",
    "cost_efficiency",
    "REPORT_CSV_COLUMNS",
]


def transport_capacity(sum_w_bps: float, y: float, m: int, w_self_bps: float,
                       w_gateway_bps: float) -> float:
    """min(sum of radio rates / mean transmissions + M*W_S, M*W_G), in bps."""
    if y < 1.0:
        raise ValueError("mean transmissions per bit cannot be below 1")
    if m < 1:
        raise ValueError("at least one gateway required")
    return min(sum_w_bps / y + m * w_self_bps, m * w_gateway_bps)


def simplified_capacity(n: int, w_bps: float, y: float, m: int, w_self_bps: float) -> float:
    """Uniform-rate capacity N*W/Y + M*W_S (the caller caps at M*W_G)."""
    if m < 1:
        raise ValueError("at least one gateway required")
    if n == 0:
        return m * w_self_bps
    if y < 1.0:
        raise ValueError("mean transmissions per bit cannot be below 1")
    return n * w_bps / y + m * w_self_bps


def average_hops(hops) -> float:
    """Arithmetic mean hop count over SBSs."""
    arr = np.asarray(hops, dtype=float)
    if arr.size == 0:
        raise ValueError("hop list is empty")
    if np.any(arr < 1):
        raise ValueError("every SBS needs at least one hop to its gateway")
    return float(arr.mean())


def weighted_capacity(w_list, hop_list) -> float:
    """N * (sum of per-SBS rates) / (sum of per-SBS hops), in bps."""
    w = np.asarray(w_list, dtype=float)
    h = np.asarray(hop_list, dtype=float)
    if w.shape != h.shape:
        raise ValueError("rate and hop lists must have equal length")
    if w.size == 0:
        raise ValueError("rate list is empty")
    if np.any(h < 1):
        raise ValueError("every SBS needs at least one hop to its gateway")
    if np.any(w < 0):
        raise ValueError("rates must be nonnegative")
    return float(w.size * w.sum() / h.sum())


def operation_energy(m: int, n: int, params, w_gateway_bps: float, w_avg_bps: float) -> float:
    """Lifetime operating energy in kWh for M gateways and N SBSs."""
    if m < 0 or n < 0:
        raise ValueError("counts must be nonnegative")
    p_gw = m * (params.power_coeff_a * params.power_norm_w
                * w_gateway_bps / params.rate_norm_bps + params.power_coeff_b_w)
    p_sbs = n * (params.power_coeff_a * params.power_norm_w
                 * w_avg_bps / params.rate_norm_bps + params.power_coeff_b_w)
    return (p_gw + p_sbs) * params.lifetime_hours / 1000.0


def embodied_energy(e_op_kwh: float, params) -> float:
    """Embodied energy, a fixed fraction f of the whole lifetime energy:
    E_EM = f/(1-f) * E_OP."""
    f = params.embodied_fraction
    return e_op_kwh * f / (1.0 - f)


def cost_efficiency(capacity_bps: float, m: int, e_op_kwh: float, params) -> float:
    """Capacity per euro of lifetime energy plus gateway deployment cost."""
    if capacity_bps < 0 or e_op_kwh < 0 or m < 0:
        raise ValueError("inputs must be nonnegative")
    e_em = embodied_energy(e_op_kwh, params)
    denom = params.energy_price_per_kwh * (e_em + e_op_kwh) + m * params.gateway_capex_eur
    if denom <= 0:
        raise ValueError("total cost must be positive")
    return capacity_bps / denom


@dataclass
class EvaluationReport:
    """One evaluated operating point of the network."""

    m: int
    n: int
    y: float  # mean transmissions per delivered bit (NaN when n == 0)
    capacity_bps: float
    per_gateway_bps: float
    e_op_kwh: float
    e_em_kwh: float
    total_cost_eur: float
    efficiency_bps_per_eur: float

    @property
    def efficiency_mbps_per_eur(self) -> float:
        return self.efficiency_bps_per_eur / 1e6

    @classmethod
    def build(cls, m, n, y, capacity_bps, cost_params, w_gateway_bps, w_avg_bps):
        e_op = operation_energy(m, n, cost_params, w_gateway_bps, w_avg_bps)
        e_em = embodied_energy(e_op, cost_params)
        eff = cost_efficiency(capacity_bps, m, e_op, cost_params)
        total = cost_params.energy_price_per_kwh * (e_em + e_op) \
            + m * cost_params.gateway_capex_eur
        return cls(
            m=m,
            n=n,
            y=y,
            capacity_bps=capacity_bps,
            per_gateway_bps=capacity_bps / m,
            e_op_kwh=e_op,
            e_em_kwh=e_em,
            total_cost_eur=total,
            efficiency_bps_per_eur=eff,
        )


REPORT_CSV_COLUMNS = [
    "m",
    "n",
    "y",
    "capacity_bps",
    "per_gateway_bps",
    "e_op_kwh",
    "e_em_kwh",
    "total_cost_eur",
    "efficiency_mbps_per_eur",
]
