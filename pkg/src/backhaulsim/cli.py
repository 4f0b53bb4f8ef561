"""Command-line interface.

Subcommands: deploy, cluster, connectivity, optimize-gateways,
route {mcst|sp|bf}, two-scale, sweep <figure-tag>. Output is CSV, written
to --out or stdout. Exit codes: 0 success, 2 configuration/usage error,
3 infeasible scenario, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import contextlib
import sys
from dataclasses import replace

from . import driver
from .channel import edge_capacities, sample_edge_channels, write_link_csv
from .clustering import form_clusters, write_clusters_csv
from .config import ScenarioConfig, load_config
from .connectivity import (
    CONNECTIVITY_CSV_COLUMNS,
    connectivity_row,
    mc_connectivity,
)
from .deployment import build_link_graph, write_deployment_csv
from .driver import FIGURE_TAGS, SweepSpec, run_sweep, run_two_scale, write_rows
from .errors import BackhaulError
from .gateway_opt import GATEWAY_CSV_COLUMNS, optimize_gateway_count, unknow_gateway
from .routing import bf_routing, evaluate_forest, mcst, sp_routing, write_forest_csv

_ROUTERS = {"mcst": mcst, "sp": sp_routing, "bf": bf_routing}


@contextlib.contextmanager
def _open_out(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            yield fh


def _load(args) -> ScenarioConfig:
    cfg = load_config(args.config) if args.config else ScenarioConfig()
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    cfg.validate()
    return cfg


def _add_common(parser):
    parser.add_argument("--config", help="plain-text key=value configuration file")
    parser.add_argument("--seed", type=int, help="master seed override")
    parser.add_argument("--out", help="output CSV path (default stdout)")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="backhaulsim",
        description="mmWave multi-hop backhaul simulator and two-scale optimizer",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("deploy", help="sample SBS positions")
    _add_common(p)

    p = sub.add_parser("cluster", help="sample a deployment and label connection clusters")
    _add_common(p)

    p = sub.add_parser("connectivity", help="analytic vs Monte-Carlo connection probabilities")
    _add_common(p)
    p.add_argument("--expected-n", type=float, default=None,
                   help="mean SBS count (default: config expected_count)")
    p.add_argument("--trials", type=int, default=100_000)

    p = sub.add_parser("optimize-gateways", help="sweep the gateway count, keep the best")
    _add_common(p)
    p.add_argument("--swap-passes", type=int, default=1,
                   help="refinement passes over the gateway set")
    p.add_argument("--coords-out", help="extra CSV with the chosen gateway coordinates")

    p = sub.add_parser("route", help="build one routing forest")
    _add_common(p)
    p.add_argument("algo", choices=sorted(_ROUTERS))
    p.add_argument("--m", type=int, default=1, help="gateway count")
    p.add_argument("--snr-db", type=float, default=None,
                   help="operating SNR override (dB)")
    p.add_argument("--links-out", help="extra CSV with per-link loss and capacity")

    p = sub.add_parser("two-scale", help="long-scale placement, short-scale routing epochs")
    _add_common(p)
    p.add_argument("--epochs", type=int, default=None)

    p = sub.add_parser("sweep", help="figure-reproduction sweep")
    _add_common(p)
    p.add_argument("tag", choices=FIGURE_TAGS)
    p.add_argument("--replications", type=int, default=None)
    p.add_argument("--trials", type=int, default=100_000,
                   help="Monte-Carlo trials per point (fig4)")

    return parser


def _cmd_deploy(args, cfg):
    dep = driver._sample_dep(cfg, cfg.seed)
    with _open_out(args.out) as fh:
        write_deployment_csv(dep, fh)
    return 0


def _cmd_cluster(args, cfg):
    dep = driver._sample_dep(cfg, cfg.seed)
    graph = build_link_graph(dep, cfg.hop_range_m)
    with _open_out(args.out) as fh:
        write_clusters_csv(form_clusters(graph), fh)
    return 0


def _cmd_connectivity(args, cfg):
    expected = args.expected_n
    if expected is None:
        expected = cfg.expected_count if cfg.expected_count is not None else cfg.count
    est = mc_connectivity(cfg.radius_m, cfg.hop_range_m, expected, args.trials, cfg.seed)
    row = connectivity_row(cfg.radius_m, cfg.hop_range_m, expected, est)
    with _open_out(args.out) as fh:
        write_rows(fh, CONNECTIVITY_CSV_COLUMNS, [row])
    return 0


def _cmd_optimize(args, cfg):
    dep = driver._sample_dep(cfg, cfg.seed)
    graph = build_link_graph(dep, cfg.hop_range_m)
    result = optimize_gateway_count(dep, graph, cfg, swap_passes=args.swap_passes)
    with _open_out(args.out) as fh:
        write_rows(fh, GATEWAY_CSV_COLUMNS, result.curve)
    if args.coords_out:
        with open(args.coords_out, "w", newline="", encoding="utf-8") as fh:
            fh.write("gateway_id,x_m,y_m\n")
            for g, (x, y) in zip(result.selection.gateways, result.positions):
                fh.write(f"{g},{float(x)!r},{float(y)!r}\n")
    return 0


def _cmd_route(args, cfg):
    if args.snr_db is not None:
        cfg = replace(cfg, channel=replace(cfg.channel, snr_db=args.snr_db))
    dep = driver._sample_dep(cfg, cfg.seed)
    graph = build_link_graph(dep, cfg.hop_range_m)
    selection = unknow_gateway(graph, args.m)
    gains, loss_db = sample_edge_channels(graph, cfg.channel, cfg.seed)
    caps = edge_capacities(gains, cfg.channel)
    if args.links_out:
        with open(args.links_out, "w", newline="", encoding="utf-8") as fh:
            write_link_csv(graph, loss_db, caps, fh)
    forest = _ROUTERS[args.algo](
        graph, caps, selection.gateways, cfg.w_max_bps, cfg.w_self_bps, cfg.w_gateway_bps
    )
    report = evaluate_forest(forest, cfg.cost, cfg.w_self_bps, cfg.w_gateway_bps,
                             cfg.w_avg_bps)
    with _open_out(args.out) as fh:
        write_forest_csv(forest, fh)
    print(
        f"algo={args.algo} m={report.m} n={report.n} y={report.y:.4f} "
        f"capacity_bps={report.capacity_bps:.6e} "
        f"efficiency_mbps_per_eur={report.efficiency_mbps_per_eur:.6f}",
        file=sys.stderr,
    )
    return 0


def _cmd_two_scale(args, cfg):
    if args.epochs is not None:
        cfg = replace(cfg, epochs=args.epochs)
        cfg.validate()
    result = run_two_scale(cfg)
    with _open_out(args.out) as fh:
        write_rows(fh, driver.TWO_SCALE_COLUMNS, result.rows)
    return 0


def _cmd_sweep(args, cfg):
    spec = SweepSpec(tag=args.tag, replications=args.replications, trials=args.trials)
    columns, rows = run_sweep(spec, cfg)
    with _open_out(args.out) as fh:
        write_rows(fh, columns, rows)
    return 0


_COMMANDS = {
    "deploy": _cmd_deploy,
    "cluster": _cmd_cluster,
    "connectivity": _cmd_connectivity,
    "optimize-gateways": _cmd_optimize,
    "route": _cmd_route,
    "two-scale": _cmd_two_scale,
    "sweep": _cmd_sweep,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _load(args)
        return _COMMANDS[args.command](args, cfg)
    except BackhaulError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


def entry():  # pragma: no cover - console-script shim
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
