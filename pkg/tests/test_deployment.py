"""Deployment sampling and link-graph construction."""

import numpy as np
import pytest

from backhaulsim.config import ScenarioConfig
from backhaulsim.deployment import (
    Deployment,
    build_link_graph,
    sample_deployment,
    sample_deployment_fixed_n,
)
from backhaulsim.errors import ConfigurationError


def cfg(expected=None, count=None, **kw):
    return ScenarioConfig(expected_count=expected, count=count, **kw).validate()


def test_poisson_count_matches_expectation():
    # Monte-Carlo mean over 10^4 seeds vs the Poisson mean, 3 sigma window
    c = cfg(expected=100.0)
    counts = [sample_deployment(c, seed).n for seed in range(10_000)]
    tol = 3.0 * np.sqrt(100.0 / 10_000)
    assert abs(np.mean(counts) - 100.0) < tol


def test_zero_density_gives_empty_deployment():
    c = cfg(expected=0.0)
    dep = sample_deployment(c, 3)
    assert dep.n == 0


def test_all_points_inside_disc():
    c = cfg(count=350)
    dep = sample_deployment_fixed_n(c, 350, 11)
    assert dep.n == 350
    assert np.all(np.hypot(dep.xy[:, 0], dep.xy[:, 1]) <= c.radius_m + 1e-9)


def test_single_point():
    dep = sample_deployment_fixed_n(cfg(count=1), 1, 0)
    assert dep.n == 1


def test_radial_cdf_uniform_on_disc():
    # empirical radius CDF vs F(r) = (r/R)^2 over 10^5 points
    c = cfg(count=100_000)
    dep = sample_deployment_fixed_n(c, 100_000, 42)
    r = np.sort(np.hypot(dep.xy[:, 0], dep.xy[:, 1]))
    emp = np.arange(1, r.size + 1) / r.size
    theory = (r / c.radius_m) ** 2
    assert np.max(np.abs(emp - theory)) < 0.01


def test_half_disc_balance():
    # point counts split evenly between half-discs (chi-square, 1% level)
    c = cfg(expected=50.0)
    upper = total = 0
    for seed in range(2_000):
        dep = sample_deployment(c, seed)
        upper += int(np.sum(dep.xy[:, 1] > 0))
        total += dep.n
    lower = total - upper
    chi2 = (upper - lower) ** 2 / total
    assert chi2 < 6.635  # chi-square 1% critical value, 1 dof


def test_determinism_per_seed():
    c = cfg(expected=80.0)
    a = sample_deployment(c, 123)
    b = sample_deployment(c, 123)
    assert a.n == b.n and np.array_equal(a.xy, b.xy)
    g1 = build_link_graph(a, c.hop_range_m)
    g2 = build_link_graph(b, c.hop_range_m)
    assert np.array_equal(g1.edges, g2.edges)


def test_different_seeds_differ():
    c = cfg(expected=80.0)
    a, b = sample_deployment(c, 1), sample_deployment(c, 2)
    assert a.n != b.n or not np.array_equal(a.xy, b.xy)


def test_link_threshold_inclusive():
    dep = Deployment(500.0, np.array([[0.0, 0.0], [200.0, 0.0]]))
    assert build_link_graph(dep, 200.0).m == 1
    dep2 = Deployment(500.0, np.array([[0.0, 0.0], [200.0 + 1e-6, 0.0]]))
    assert build_link_graph(dep2, 200.0).m == 0


def test_link_graph_matches_bruteforce():
    c = cfg(count=50)
    dep = sample_deployment_fixed_n(c, 50, 5)
    graph = build_link_graph(dep, c.hop_range_m)
    expected = set()
    for i in range(50):
        for j in range(i + 1, 50):
            if np.hypot(*(dep.xy[i] - dep.xy[j])) <= c.hop_range_m:
                expected.add((i, j))
    assert set(map(tuple, graph.edges)) == expected
    assert np.all(graph.lengths_m > 0)


def test_graph_symmetric_irreflexive():
    c = cfg(count=60)
    graph = build_link_graph(sample_deployment_fixed_n(c, 60, 9), c.hop_range_m)
    assert np.all(graph.edges[:, 0] < graph.edges[:, 1])
    for node in range(graph.n):
        assert node not in graph.neighbors(node)
    for a, b in graph.edges:
        assert a in graph.neighbors(b) and b in graph.neighbors(a)


def test_bad_config_rejected():
    with pytest.raises(ConfigurationError):
        ScenarioConfig(radius_m=-1.0).validate()
    with pytest.raises(ConfigurationError):
        ScenarioConfig(hop_range_m=1500.0).validate()  # > 2R
    with pytest.raises(ConfigurationError):
        ScenarioConfig(expected_count=100.0, count=100).validate()
    assert ScenarioConfig().validate().expected_count == 100.0
    with pytest.raises(ConfigurationError):
        sample_deployment(ScenarioConfig(expected_count=-5.0), 0)


def test_points_outside_disc_rejected():
    with pytest.raises(ConfigurationError):
        Deployment(100.0, np.array([[200.0, 0.0]]))
