"""Bit-level forwarding simulation against the transport-capacity law."""

import numpy as np
import pytest

from bitsim import simulate_bit_forwarding

from backhaulsim.costmodel import average_hops, transport_capacity


def _random_forest(n, m, rng):
    """Random gateway-rooted forest on n nodes with m gateways."""
    nodes = list(range(n))
    gateways = sorted(map(int, rng.choice(n, size=m, replace=False)))
    parent = {}
    attached = list(gateways)
    for v in nodes:
        if v in gateways:
            parent[v] = None
    for v in nodes:
        if v in gateways:
            continue
        parent[v] = int(rng.choice(attached))
        attached.append(v)
    hops = {}

    def hop_of(v):
        if parent[v] is None:
            return 0
        if v not in hops:
            hops[v] = hop_of(parent[v]) + 1
        return hops[v]

    return gateways, parent, {v: hop_of(v) for v in nodes if parent[v] is not None}


def test_path_identity_exact():
    # 2-node chain behind one gateway, equal source rates
    parent = {0: None, 1: 0, 2: 1}
    delivered, hopsum, tx = simulate_bit_forwarding(parent, {0}, {1: 5, 2: 5}, 300)
    y = hopsum / delivered
    formula = transport_capacity(sum(tx.values()), y, 1, 0.0, 1e18)
    assert formula == pytest.approx(delivered, rel=0.02)
    # steady state: node 1 transmits its own plus node 2's bits
    assert tx[1] / 300 == pytest.approx(10, rel=0.02)


def test_random_six_node_instances_match_capacity_law():
    rng = np.random.default_rng(123)
    for trial in range(25):
        m = int(rng.integers(1, 3))
        gateways, parent, hops = _random_forest(6, m, rng)
        rates = {v: int(rng.integers(1, 6)) for v in parent if parent[v] is not None}
        slots = 500
        delivered, hopsum, tx = simulate_bit_forwarding(parent, gateways, rates, slots)
        y = hopsum / delivered
        w_self = float(rng.integers(0, 5))
        c_sim = delivered / slots + m * w_self
        c_formula = transport_capacity(sum(tx.values()) / slots, y, m, w_self, 1e18)
        assert c_formula == pytest.approx(c_sim, rel=0.02), trial


def test_equal_rates_reduce_to_plain_mean_hops():
    rng = np.random.default_rng(7)
    gateways, parent, hops = _random_forest(6, 1, rng)
    rates = {v: 4 for v in hops}
    delivered, hopsum, _ = simulate_bit_forwarding(parent, gateways, rates, 400)
    y_bits = hopsum / delivered
    assert y_bits == pytest.approx(average_hops(list(hops.values())), rel=0.02)


def test_gateway_cap_engages():
    # formula side: the joint forwarding limit truncates the uncapped value
    assert transport_capacity(100.0, 2.0, 1, 0.0, 30.0) == 30.0
