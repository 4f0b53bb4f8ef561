"""Millimeter-wave MIMO channel sampling and per-link capacity.

Large-scale loss in dB is beta + 10*gamma*log10(distance) + shadowing, with
beta = 20*log10(4*pi/wavelength). The channel matrix is a sum of plane-wave
paths: H = sqrt(N_T*N_R / (loss_linear * paths)) * sum_u alpha_u a_r a_t^*,
with complex-normal path gains and angles uniform on [0, 2*pi). Capacity
uses the information-theoretic optimum of the hybrid precoder/combiner:
truncated singular-vector beamforming with equal power per stream,
c = B * sum_k log2(1 + rho/N_s * s_k^2) over the N_s largest singular values.
Interference between links is ignored, so links are evaluated independently.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .seeding import derive_rng

__all__ = [
    "ChannelRealization",
    "path_loss_db",
    "steering_vector",
    "sample_channel",
    "link_capacity",
    "capacity_from_gains",
    "sample_edge_channels",
    "sample_edge_gains",
    "edge_capacities",
    "write_link_csv",
]


def path_loss_db(distance_m: float, params, seed: int | None = None) -> float:
    """Large-scale loss in dB at ``distance_m``; shadowing drawn per ``seed``.

    A zero shadowing standard deviation makes the result deterministic.
    """
    if distance_m <= 0:
        raise ValueError("distance must be positive")
    beta = 20.0 * math.log10(4.0 * math.pi / params.wavelength_m)
    loss = beta + 10.0 * params.path_loss_exponent * math.log10(distance_m)
    if params.shadowing_std_db > 0:
        rng = derive_rng(0 if seed is None else seed, "shadowing")
        loss += params.shadowing_std_db * float(rng.standard_normal())
    return loss


def steering_vector(theta: float, count: int, spacing_m: float, wavelength_m: float) -> np.ndarray:
    """Uniform linear array response, unit Euclidean norm."""
    if count < 1:
        raise ValueError("antenna count must be at least 1")
    k = np.arange(count)
    phase = 2.0 * np.pi * k * spacing_m * math.sin(theta) / wavelength_m
    return np.exp(1j * phase) / math.sqrt(count)


@dataclass(eq=False)
class ChannelRealization:
    """One sampled link channel with the factors it was assembled from."""

    H: np.ndarray  # (rx_antennas, tx_antennas), complex
    aoa_rad: np.ndarray  # (paths,)
    aod_rad: np.ndarray  # (paths,)
    path_gains: np.ndarray  # (paths,), complex unit-variance
    loss_db: float

    def reconstruct(self, params) -> np.ndarray:
        """Rebuild H from the stored factors (used to verify integrity)."""
        a_r = np.column_stack(
            [steering_vector(t, params.rx_antennas, params.antenna_spacing_m,
                             params.wavelength_m) for t in self.aoa_rad]
        )
        a_t = np.column_stack(
            [steering_vector(t, params.tx_antennas, params.antenna_spacing_m,
                             params.wavelength_m) for t in self.aod_rad]
        )
        loss_lin = 10.0 ** (self.loss_db / 10.0)
        scale = math.sqrt(params.tx_antennas * params.rx_antennas
                          / (loss_lin * len(self.path_gains)))
        return scale * (a_r @ np.diag(self.path_gains) @ a_t.conj().T)


def sample_channel(distance_m: float, params, seed: int) -> ChannelRealization:
    """Draw one link realization: shadowed loss, path gains and angles."""
    if distance_m <= 0:
        raise ValueError("distance must be positive")
    rng = derive_rng(seed, "channel")
    beta = 20.0 * math.log10(4.0 * math.pi / params.wavelength_m)
    loss_db = beta + 10.0 * params.path_loss_exponent * math.log10(distance_m)
    if params.shadowing_std_db > 0:
        loss_db += params.shadowing_std_db * float(rng.standard_normal())
    eta = params.path_count
    aoa = rng.uniform(0.0, 2.0 * np.pi, size=eta)
    aod = rng.uniform(0.0, 2.0 * np.pi, size=eta)
    gains = (rng.standard_normal(eta) + 1j * rng.standard_normal(eta)) / math.sqrt(2.0)
    real = ChannelRealization(
        H=np.empty((params.rx_antennas, params.tx_antennas), complex),
        aoa_rad=aoa,
        aod_rad=aod,
        path_gains=gains,
        loss_db=loss_db,
    )
    real.H = real.reconstruct(params)
    return real


def _stream_gains(H: np.ndarray, n_streams: int) -> np.ndarray:
    """Squared singular values feeding the ``n_streams`` strongest eigenmodes."""
    s = np.linalg.svd(H, compute_uv=False)
    out = np.zeros(n_streams)
    take = min(n_streams, s.shape[0])
    out[:take] = s[:take] ** 2
    return out


def capacity_from_gains(gains_sq: np.ndarray, params, snr_db: float | None = None) -> float:
    """Capacity in bps from per-stream squared singular values."""
    snr = params.snr_db if snr_db is None else snr_db
    rho = 10.0 ** (snr / 10.0)
    per_stream = rho / params.data_streams
    return float(params.bandwidth_hz * np.sum(np.log2(1.0 + per_stream * np.asarray(gains_sq))))


def link_capacity(realization: ChannelRealization, params, snr_db: float | None = None) -> float:
    """Capacity of one link under optimal eigenmode beamforming, in bps.

    Streams beyond the channel rank contribute zero; that is not an error.
    """
    gains = _stream_gains(realization.H, params.data_streams)
    return capacity_from_gains(gains, params, snr_db)


def sample_edge_channels(graph, params, seed: int):
    """Draw every link's channel; returns (stream gains, sampled loss in dB).

    Edge k of the canonical edge list gets its own derived stream, so the
    result is independent of evaluation order and reproducible per seed.
    SNR enters only through ``edge_capacities``; gains can be reused across
    an SNR sweep.
    """
    m = graph.m
    gains = np.zeros((m, params.data_streams))
    loss_db = np.zeros(m)
    rng = derive_rng(seed, "edges")
    edge_seeds = rng.integers(0, 2**62, size=m)
    for k in range(m):
        real = sample_channel(float(graph.lengths_m[k]), params, int(edge_seeds[k]))
        gains[k] = _stream_gains(real.H, params.data_streams)
        loss_db[k] = real.loss_db
    return gains, loss_db


def sample_edge_gains(graph, params, seed: int) -> np.ndarray:
    """Per-edge squared singular values, shape (edges, data_streams)."""
    return sample_edge_channels(graph, params, seed)[0]


def edge_capacities(gains_sq: np.ndarray, params, snr_db: float | None = None) -> np.ndarray:
    """Vector of per-edge capacities in bps for one SNR operating point."""
    snr = params.snr_db if snr_db is None else snr_db
    rho = 10.0 ** (snr / 10.0)
    per_stream = rho / params.data_streams
    return params.bandwidth_hz * np.log2(1.0 + per_stream * gains_sq).sum(axis=1)


def write_link_csv(graph, loss_db, capacities_bps, fh):
    """Optional per-link dump: endpoints, distance, loss and capacity."""
    writer = csv.writer(fh)
    writer.writerow(["src", "dst", "distance_m", "psi_db", "capacity_bps"])
    for k in range(graph.m):
        writer.writerow(
            [
                int(graph.edges[k, 0]),
                int(graph.edges[k, 1]),
                repr(float(graph.lengths_m[k])),
                repr(float(loss_db[k])),
                repr(float(capacities_bps[k])),
            ]
        )
