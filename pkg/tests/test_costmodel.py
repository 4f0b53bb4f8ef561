"""Transport capacity, energy and cost-efficiency arithmetic."""

import numpy as np
import pytest

from backhaulsim.config import CostParams
from backhaulsim.costmodel import (
    EvaluationReport,
    average_hops,
    cost_efficiency,
    embodied_energy,
    operation_energy,
    simplified_capacity,
    transport_capacity,
    weighted_capacity,
)

G = 1e9


def test_transport_capacity_single_hop_saturation():
    assert transport_capacity(500 * G, 1.0, 5, 0.0, 100 * G) == 500 * G
    assert transport_capacity(900 * G, 1.0, 5, 0.0, 100 * G) == 500 * G


def test_transport_capacity_worked_example():
    # 100 SBSs at 10 Gbps, two transmissions per bit, five gateways with
    # 10 Gbps self-traffic, 100 Gbps forwarding cap
    value = transport_capacity(1000 * G, 2.0, 5, 10 * G, 100 * G)
    assert value == pytest.approx(500 * G)


def test_transport_capacity_uncapped_when_gateways_large():
    value = transport_capacity(700 * G, 2.0, 3, 5 * G, 1e15)
    assert value == pytest.approx(700 * G / 2 + 15 * G)


def test_transport_capacity_domain():
    with pytest.raises(ValueError):
        transport_capacity(1.0, 0.5, 1, 0.0, 1.0)
    with pytest.raises(ValueError):
        transport_capacity(1.0, 1.0, 0, 0.0, 1.0)


def test_simplified_capacity_cases():
    assert simplified_capacity(0, 10 * G, 1.0, 3, 7 * G) == 21 * G
    assert simplified_capacity(50, 10 * G, 2.5, 3, 10 * G) == pytest.approx(230 * G)
    rng = np.random.default_rng(4)
    for _ in range(50):
        n = int(rng.integers(1, 200))
        w = float(rng.uniform(1, 20)) * G
        y = float(rng.uniform(1, 4))
        m = int(rng.integers(1, 10))
        ws = float(rng.uniform(0, 10)) * G
        assert simplified_capacity(n, w, y, m, ws) == pytest.approx(
            transport_capacity(n * w, y, m, ws, 1e18)
        )


def test_average_hops():
    assert average_hops([1, 1, 1]) == 1.0
    assert average_hops([1, 2, 3]) == 2.0
    with pytest.raises(ValueError):
        average_hops([])
    with pytest.raises(ValueError):
        average_hops([0, 1])


def test_weighted_capacity_cases():
    assert weighted_capacity([10 * G, 10 * G], [1, 3]) == pytest.approx(10 * G)
    # uniform rates and hops collapse to the simplified form
    assert weighted_capacity([7 * G] * 10, [2] * 10) == pytest.approx(
        simplified_capacity(10, 7 * G, 2.0, 1, 0.0)
    )
    base = weighted_capacity([3 * G, 5 * G, 2 * G], [1, 2, 2])
    scaled = weighted_capacity([6 * G, 10 * G, 4 * G], [1, 2, 2])
    assert scaled == pytest.approx(2 * base)
    with pytest.raises(ValueError):
        weighted_capacity([1.0, 2.0], [1])


def test_bitwise_hop_accounting_matches_weighted_form():
    # per-bit accounting: rate-weighted transmissions over rate-weighted bits
    rng = np.random.default_rng(11)
    rates = rng.uniform(1, 10, size=8) * G
    hops = rng.integers(1, 5, size=8)
    n = len(rates)
    c = weighted_capacity(rates, hops)
    # every delivered bit from SBS i consumes hops[i] transmissions; the
    # network sustains sum(rates) only when scaled by mean hops
    assert c == pytest.approx(n * np.sum(rates) / np.sum(hops))


def test_operation_energy_reference_point():
    p = CostParams()
    # one gateway at the 100 Gbps cap: 7.84 * 100 + 71.5 = 855.5 W
    e = operation_energy(1, 0, p, 100 * G, 10 * G)
    assert e == pytest.approx(855.5 * p.lifetime_hours / 1000.0)
    assert operation_energy(0, 0, p, 100 * G, 10 * G) == 0.0


def test_operation_energy_idle_limit():
    p = CostParams(power_coeff_a=1e-12)
    e = operation_energy(0, 10, p, 100 * G, 1 * G)
    assert e == pytest.approx(10 * p.power_coeff_b_w * p.lifetime_hours / 1000.0, rel=1e-9)


def test_embodied_energy_fraction():
    p = CostParams(embodied_fraction=0.2)
    assert embodied_energy(100.0, p) == pytest.approx(25.0)
    total = 100.0 + embodied_energy(100.0, p)
    assert embodied_energy(100.0, p) / total == pytest.approx(0.2)


def test_cost_efficiency_basics():
    p = CostParams()
    assert cost_efficiency(0.0, 3, 1000.0, p) == 0.0
    e1 = cost_efficiency(100 * G, 3, 1000.0, p)
    e2 = cost_efficiency(200 * G, 3, 1000.0, p)
    assert e2 == pytest.approx(2 * e1)
    with pytest.raises(ValueError):
        cost_efficiency(1.0, -1, 0.0, p)


def test_cost_efficiency_units():
    # five-year lifetime, 1 euro/kWh, 3900 euro per gateway
    p = CostParams()
    m, n = 6, 344
    e_op = operation_energy(m, n, p, 100 * G, 10 * G)
    eff = cost_efficiency(600 * G, m, e_op, p)
    expected_denom = 1.25 * e_op + m * 3900.0
    assert eff == pytest.approx(600 * G / expected_denom)


def test_report_build():
    p = CostParams()
    rep = EvaluationReport.build(5, 95, 2.0, 500 * G, p, 100 * G, 10 * G)
    assert rep.per_gateway_bps == pytest.approx(100 * G)
    assert rep.capacity_bps <= 5 * 100 * G
    assert rep.efficiency_mbps_per_eur == pytest.approx(rep.efficiency_bps_per_eur / 1e6)
    assert rep.total_cost_eur == pytest.approx(
        p.energy_price_per_kwh * (rep.e_op_kwh + rep.e_em_kwh) + 5 * p.gateway_capex_eur
    )
