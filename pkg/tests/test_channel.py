"""mmWave channel sampling and link-capacity evaluation."""

import math

import numpy as np
import pytest

from backhaulsim.channel import (
    capacity_from_gains,
    edge_capacities,
    link_capacity,
    path_loss_db,
    sample_channel,
    sample_edge_gains,
    steering_vector,
)
from backhaulsim.config import ChannelParams, ScenarioConfig
from backhaulsim.deployment import build_link_graph, sample_deployment_fixed_n


def params(**kw):
    return ChannelParams(**kw)


def test_reference_loss_at_one_meter():
    p = params()
    expected_beta = 20 * math.log10(4 * math.pi / 0.005)
    assert path_loss_db(1.0, p) == pytest.approx(expected_beta, rel=1e-12)


def test_distance_doubling_adds_log_law_step():
    p = params()
    step = path_loss_db(200.0, p) - path_loss_db(100.0, p)
    assert step == pytest.approx(10 * p.path_loss_exponent * math.log10(2), rel=1e-12)


def test_shadowing_moments():
    p = params(shadowing_std_db=4.0)
    base = path_loss_db(100.0, params())
    draws = np.array([path_loss_db(100.0, p, seed=s) - base for s in range(100_000)])
    assert abs(draws.mean()) < 0.05
    assert np.var(draws) == pytest.approx(16.0, rel=0.02)


def test_loss_requires_positive_distance():
    with pytest.raises(ValueError):
        path_loss_db(0.0, params())


def test_steering_vector_basics():
    p = params()
    v = steering_vector(0.0, 8, p.antenna_spacing_m, p.wavelength_m)
    assert np.allclose(v, np.full(8, 1 / math.sqrt(8)))
    for theta in (0.3, 1.2, 4.4):
        v = steering_vector(theta, 16, p.antenna_spacing_m, p.wavelength_m)
        assert np.linalg.norm(v) == pytest.approx(1.0, rel=1e-12)


def test_steering_vector_half_wavelength_phases():
    lam = 0.005
    v = steering_vector(math.pi / 2, 4, lam / 2, lam)
    phases = np.angle(v * math.sqrt(4))
    expected = np.mod([0.0, math.pi, 2 * math.pi, 3 * math.pi], 2 * math.pi)
    got = np.mod(phases, 2 * math.pi)
    assert np.allclose(np.minimum(np.abs(got - expected), 2 * math.pi - np.abs(got - expected)), 0, atol=1e-9)


def test_single_path_channel_is_rank_one():
    p = params(path_count=1)
    real = sample_channel(120.0, p, seed=3)
    s = np.linalg.svd(real.H, compute_uv=False)
    assert s[0] > 0 and np.all(s[1:] < s[0] * 1e-10)


def test_channel_frobenius_moment():
    # E||H||_F^2 = N_T N_R / loss_linear by construction
    p = params(tx_antennas=8, rx_antennas=16, path_count=2)
    dist = 150.0
    loss_lin = 10 ** (path_loss_db(dist, p) / 10)
    target = p.tx_antennas * p.rx_antennas / loss_lin
    vals = []
    for s in range(10_000):
        real = sample_channel(dist, p, seed=s)
        vals.append(np.sum(np.abs(real.H) ** 2))
    assert np.mean(vals) == pytest.approx(target, rel=0.03)


def test_channel_determinism():
    p = params()
    a = sample_channel(150.0, p, seed=11)
    b = sample_channel(150.0, p, seed=11)
    assert np.array_equal(a.H, b.H)
    assert not np.array_equal(a.H, sample_channel(150.0, p, seed=12).H)


def test_stored_factors_reconstruct_channel():
    p = params(shadowing_std_db=6.0)
    real = sample_channel(80.0, p, seed=21)
    rebuilt = real.reconstruct(p)
    err = np.linalg.norm(real.H - rebuilt) / np.linalg.norm(real.H)
    assert err < 1e-12


def test_zero_channel_zero_capacity():
    p = params()
    real = sample_channel(100.0, p, seed=1)
    real.H = np.zeros_like(real.H)
    assert link_capacity(real, p) == 0.0


def test_rank_one_capacity_formula():
    p = params(path_count=1, data_streams=1, tx_rf_chains=1, rx_rf_chains=1)
    real = sample_channel(100.0, p, seed=7)
    rho = 10 ** (p.snr_db / 10)
    expected = p.bandwidth_hz * math.log2(1 + rho * np.sum(np.abs(real.H) ** 2))
    assert link_capacity(real, p) == pytest.approx(expected, rel=1e-12)


def test_capacity_matches_determinant_oracle():
    # optimal singular-vector precoding/combining in the determinant form
    rng = np.random.default_rng(17)
    H = rng.standard_normal((8, 4)) + 1j * rng.standard_normal((8, 4))
    p = params(tx_antennas=4, rx_antennas=8, data_streams=2,
               tx_rf_chains=2, rx_rf_chains=2, snr_db=12.0)
    U, s, Vh = np.linalg.svd(H)
    F = U[:, :2]
    P = Vh.conj().T[:, :2]
    rho = 10 ** (p.snr_db / 10)
    inner = (rho / 2) * (F.conj().T @ H @ P @ P.conj().T @ H.conj().T @ F)
    sign, logdet = np.linalg.slogdet(np.eye(2) + inner)
    oracle = p.bandwidth_hz * logdet / math.log(2)
    direct = capacity_from_gains(s[:2] ** 2, p)
    assert abs(sign - 1.0) < 1e-12
    assert direct == pytest.approx(oracle, rel=1e-10)


def test_streams_beyond_rank_contribute_zero():
    p = params(path_count=1, data_streams=2)
    real = sample_channel(100.0, p, seed=9)
    one = params(path_count=1, data_streams=1, tx_rf_chains=1, rx_rf_chains=1)
    c2 = link_capacity(real, p)
    s1 = np.linalg.svd(real.H, compute_uv=False)[0]
    rho = 10 ** (p.snr_db / 10)
    assert c2 == pytest.approx(p.bandwidth_hz * math.log2(1 + rho / 2 * s1**2), rel=1e-12)


def test_capacity_monotone_in_snr_and_streams():
    p = params()
    real = sample_channel(140.0, p, seed=30)
    caps = [link_capacity(real, p, snr_db=s) for s in range(-10, 31, 5)]
    assert all(a < b for a, b in zip(caps, caps[1:]))
    # at the power split of the configured stream count, feeding an extra
    # eigenmode into the sum cannot reduce capacity
    p4 = params(path_count=4, data_streams=4, tx_rf_chains=4, rx_rf_chains=4)
    for seed in range(20):
        gains = np.sort(
            np.linalg.svd(sample_channel(140.0, p4, seed=seed).H, compute_uv=False)
        )[::-1] ** 2
        caps_k = [capacity_from_gains(gains[:k], p4) for k in (1, 2, 3, 4)]
        assert all(b >= a - 1e-9 for a, b in zip(caps_k, caps_k[1:]))


def test_edge_gain_sampling_deterministic_and_snr_free():
    cfg = ScenarioConfig(count=40).validate()
    dep = sample_deployment_fixed_n(cfg, 40, 2)
    graph = build_link_graph(dep, cfg.hop_range_m)
    g1 = sample_edge_gains(graph, cfg.channel, 77)
    g2 = sample_edge_gains(graph, cfg.channel, 77)
    assert np.array_equal(g1, g2)
    c_lo = edge_capacities(g1, cfg.channel, snr_db=0.0)
    c_hi = edge_capacities(g1, cfg.channel, snr_db=20.0)
    assert c_lo.shape == (graph.m,)
    assert np.all(c_hi > c_lo)


def test_multipoint_antenna_check():
    p = params()
    p.check_multipoint(8)  # 128 >= 8 * 16
    with pytest.raises(Exception):
        p.check_multipoint(9)
