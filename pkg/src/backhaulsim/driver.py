"""Experiment orchestration: the two-scale loop and figure-reproduction sweeps.

Two-scale run: gateway count and positions are fixed on the long scale from
the uniform-rate capacity model, then every epoch resamples all link
channels and rebuilds routes with the greedy capacity forest; energies stay
fixed within a long-scale period, so ranking epochs by cost efficiency is
the same as ranking them by capacity.

Sweeps write tidy CSV. Every row carries the master seed, the replication
index and all swept values, so any row can be reproduced from the row plus
the configuration. Deployments whose cluster structure cannot host the
smallest requested gateway count are redrawn from deterministic follow-up
seeds (at default density almost every draw forms a single cluster).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace

import numpy as np

from .channel import edge_capacities, sample_edge_gains
from .clustering import form_clusters
from .config import ScenarioConfig
from .connectivity import connectivity_row, mc_connectivity
from .deployment import build_link_graph, sample_deployment, sample_deployment_fixed_n
from .errors import ConfigurationError, InfeasibleScenarioError
from .gateway_opt import optimize_gateway_count, unknow_gateway
from .routing import bf_routing, evaluate_forest, mcst, sp_routing
from .seeding import derive_seed_sequence

__all__ = [
    "SweepSpec",
    "EpochSchedule",
    "TwoScaleResult",
    "FIGURE_TAGS",
    "run_two_scale",
    "run_sweep",
    "default_grid",
    "write_rows",
]

FIGURE_TAGS = ("fig4", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11")

TWO_SCALE_COLUMNS = [
    "master_seed", "epoch", "snr_db", "m", "n", "y", "capacity_bps",
    "per_gateway_bps", "e_op_kwh", "e_em_kwh", "total_cost_eur",
    "efficiency_mbps_per_eur",
]

_ROUTERS = {"mcst": mcst, "sp": sp_routing, "bf": bf_routing}


def _subseed(master: int, *path) -> int:
    return int(derive_seed_sequence(master, *path).generate_state(1, np.uint64)[0])


@dataclass
class EpochSchedule:
    """Short-scale schedule: channels resample every epoch; gateway placement
    refreshes every ``reopt_period`` epochs (0 = once for the whole run)."""

    epochs: int
    reopt_period: int = 0

    @classmethod
    def from_config(cls, config) -> "EpochSchedule":
        if config.epochs < 1:
            raise ConfigurationError("epochs must be at least 1")
        return cls(config.epochs, config.reopt_period)


@dataclass
class TwoScaleResult:
    optimization: object
    rows: list[dict]


def _sample_dep(config, seed):
    if config.count is not None:
        return sample_deployment_fixed_n(config, config.count, seed)
    return sample_deployment(config, seed)


def run_two_scale(config: ScenarioConfig) -> TwoScaleResult:
    """Long-scale placement once (or per period), short-scale routing per epoch."""
    config.validate()
    schedule = EpochSchedule.from_config(config)
    master = config.seed
    dep = _sample_dep(config, _subseed(master, "two-scale", "deploy"))
    graph = build_link_graph(dep, config.hop_range_m)
    opt = optimize_gateway_count(dep, graph, config)
    rows = []
    for epoch in range(schedule.epochs):
        if schedule.reopt_period and epoch and epoch % schedule.reopt_period == 0:
            opt = optimize_gateway_count(dep, graph, config)
        gains = sample_edge_gains(
            graph, config.channel, _subseed(master, "two-scale", "epoch", epoch)
        )
        caps = edge_capacities(gains, config.channel)
        forest = mcst(
            graph, caps, opt.selection.gateways,
            config.w_max_bps, config.w_self_bps, config.w_gateway_bps,
        )
        report = evaluate_forest(
            forest, config.cost, config.w_self_bps, config.w_gateway_bps,
            config.w_avg_bps,
        )
        rows.append(
            {
                "master_seed": master,
                "epoch": epoch,
                "snr_db": config.channel.snr_db,
                "m": report.m,
                "n": report.n,
                "y": report.y,
                "capacity_bps": report.capacity_bps,
                "per_gateway_bps": report.per_gateway_bps,
                "e_op_kwh": report.e_op_kwh,
                "e_em_kwh": report.e_em_kwh,
                "total_cost_eur": report.total_cost_eur,
                "efficiency_mbps_per_eur": report.efficiency_mbps_per_eur,
            }
        )
    return TwoScaleResult(opt, rows)


@dataclass
class SweepSpec:
    """One figure-reproduction sweep: which variable, its grid, how many
    replications per point."""

    tag: str
    grid: list | None = None
    replications: int | None = None
    trials: int = 100_000
    m_list: list[int] | None = None

    def resolved(self, config) -> "SweepSpec":
        if self.tag not in FIGURE_TAGS:
            raise ConfigurationError(f"unknown sweep tag {self.tag!r}")
        grid = self.grid if self.grid is not None else default_grid(self.tag, config)
        if len(grid) == 0:
            raise ConfigurationError("sweep grid must be non-empty")
        reps = self.replications
        if reps is None:
            reps = 1 if self.tag == "fig4" else 20
        if reps < 1:
            raise ConfigurationError("replications must be at least 1")
        m_list = self.m_list
        if m_list is None:
            if self.tag == "fig9":
                m_list = list(range(1, config.max_gateways + 1))
            else:
                m_list = [1, 5]
        return SweepSpec(self.tag, list(grid), reps, self.trials, list(m_list))


def default_grid(tag: str, config) -> list:
    if tag == "fig4":
        return sorted(set(range(20, 201, 20)) | {126})
    if tag == "fig6":
        return [50, 100, 150, 200, 250, 300, 350, 400]
    if tag == "fig7":
        return [float(g) * 1e9 for g in range(20, 201, 20)]
    return [float(s) for s in range(-10, 31, 5)]  # SNR sweeps


def _graph_for_routing(config, master, tag, rep_tokens, min_m, need_n):
    """Deployment + link graph whose cluster count fits the smallest gateway set."""
    for attempt in range(200):
        dep = _sample_dep(config, _subseed(master, tag, "deploy", *rep_tokens, attempt))
        if dep.n < need_n:
            continue
        graph = build_link_graph(dep, config.hop_range_m)
        if form_clusters(graph).B <= min_m:
            return dep, graph
    raise InfeasibleScenarioError(
        f"no deployment with at most {min_m} clusters found for {tag} rep {rep_tokens}"
    )


def _sweep_fig4(spec, config):
    columns = ["master_seed", "replication", "trials"] + [
        "mu", "expected_n", "p_iso", "p_noniso_analytic", "p_noniso_mc",
        "p_con_mc", "se_noniso", "se_con",
    ]
    keys = ("expected_n", "replication")
    rows = []
    for expected_n in spec.grid:
        for rep in range(spec.replications):
            est = mc_connectivity(
                config.radius_m, config.hop_range_m, float(expected_n), spec.trials,
                _subseed(config.seed, "fig4", str(expected_n), rep),
            )
            row = {"master_seed": config.seed, "replication": rep, "trials": spec.trials}
            row.update(
                connectivity_row(config.radius_m, config.hop_range_m, float(expected_n), est)
            )
            rows.append(row)
    return columns, rows, keys


def _optimize_rows(spec, config, swept_name):
    columns = [
        "master_seed", "replication", swept_name, "n", "M", "Y", "capacity_bps",
        "energy_kwh", "cost_eur", "efficiency_mbps_per_eur",
    ]
    keys = (swept_name, "replication", "M")
    rows = []
    for point in spec.grid:
        if spec.tag == "fig6":
            cfg = replace(config, count=int(point), expected_count=None)
        else:
            cfg = replace(config, w_gateway_bps=float(point))
        cfg.validate()
        for rep in range(spec.replications):
            dep, graph = _graph_for_routing(
                cfg, config.seed, spec.tag, (str(point), rep), cfg.max_gateways,
                need_n=cfg.max_gateways,
            )
            opt = optimize_gateway_count(dep, graph, cfg)
            for entry in opt.curve:
                rows.append(
                    {
                        "master_seed": config.seed,
                        "replication": rep,
                        swept_name: point,
                        "n": graph.n,
                        "M": entry["M"],
                        "Y": entry["Y"],
                        "capacity_bps": entry["capacity_bps"],
                        "energy_kwh": entry["energy_kwh"],
                        "cost_eur": entry["cost_eur"],
                        "efficiency_mbps_per_eur": entry["efficiency_mbps_per_eur"],
                    }
                )
    return columns, rows, keys


def _routing_rows(spec, config, algos):
    columns = [
        "master_seed", "replication", "snr_db", "m", "algo", "n", "y",
        "capacity_bps", "efficiency_mbps_per_eur",
    ]
    keys = ("snr_db", "m", "algo", "replication")
    rows = []
    min_m = min(spec.m_list)
    for rep in range(spec.replications):
        dep, graph = _graph_for_routing(
            config, config.seed, spec.tag, (rep,), min_m, need_n=max(spec.m_list) + 1
        )
        gains = sample_edge_gains(
            graph, config.channel, _subseed(config.seed, spec.tag, "channel", rep)
        )
        selections = {m: unknow_gateway(graph, m) for m in spec.m_list}
        for m in spec.m_list:
            gateways = selections[m].gateways
            for snr in spec.grid:
                caps = edge_capacities(gains, config.channel, snr_db=float(snr))
                for algo in algos:
                    forest = _ROUTERS[algo](
                        graph, caps, gateways,
                        config.w_max_bps, config.w_self_bps, config.w_gateway_bps,
                    )
                    report = evaluate_forest(
                        forest, config.cost, config.w_self_bps,
                        config.w_gateway_bps, config.w_avg_bps,
                    )
                    rows.append(
                        {
                            "master_seed": config.seed,
                            "replication": rep,
                            "snr_db": float(snr),
                            "m": m,
                            "algo": algo,
                            "n": report.n,
                            "y": report.y,
                            "capacity_bps": report.capacity_bps,
                            "efficiency_mbps_per_eur": report.efficiency_mbps_per_eur,
                        }
                    )
    return columns, rows, keys


def run_sweep(spec: SweepSpec, config: ScenarioConfig):
    """Run one figure sweep; returns (columns, rows) with rows sorted by keys."""
    config.validate()
    spec = spec.resolved(config)
    if spec.tag == "fig4":
        columns, rows, keys = _sweep_fig4(spec, config)
    elif spec.tag == "fig6":
        columns, rows, keys = _optimize_rows(spec, config, "n_total")
    elif spec.tag == "fig7":
        columns, rows, keys = _optimize_rows(spec, config, "w_gateway_bps")
    elif spec.tag in ("fig8", "fig9"):
        columns, rows, keys = _routing_rows(spec, config, algos=("mcst",))
    else:  # fig10 / fig11: three-algorithm comparison
        columns, rows, keys = _routing_rows(spec, config, algos=("mcst", "bf", "sp"))
    rows.sort(key=lambda r: tuple(r[c] for c in keys))
    return columns, rows


def write_rows(fh, columns, rows):
    writer = csv.DictWriter(fh, fieldnames=columns)
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
