"""Scenario configuration: physical, traffic, cost and sweep parameters.

All quantities are SI: meters, bits per second, Hz, Watt, hours. The default
values follow the standard mmWave small-cell setup used throughout:
a 500 m macro cell, 200 m maximum hop distance, 100 SBSs expected per cell,
10 Gbps maximum SBS backhaul rate and 100 Gbps gateway forwarding capacity.

Configs can be loaded from a plain-text ``key = value`` file; see
``CONFIG_KEYS`` for the accepted keys (they mirror the dataclass fields).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

from .errors import ConfigurationError

__all__ = ["ChannelParams", "CostParams", "ScenarioConfig", "load_config", "CONFIG_KEYS"]

HOURS_PER_YEAR = 8760.0  # 365-day years


@dataclass
class ChannelParams:
    """Millimeter-wave MIMO link parameters.

    The operating point is parameterised by ``snr_db`` = 10*log10(P/sigma^2),
    the transmit-power to noise-power ratio; absolute noise power is never
    needed separately.
    """

    wavelength_m: float = 0.005
    path_loss_exponent: float = 2.0
    shadowing_std_db: float = 0.0
    path_count: int = 2
    antenna_spacing_m: float = 0.0025
    tx_antennas: int = 16
    rx_antennas: int = 128
    tx_rf_chains: int = 4
    rx_rf_chains: int = 4
    data_streams: int = 2
    bandwidth_hz: float = 1e9
    max_tx_power_w: float = 1.0
    snr_db: float = 10.0

    def validate(self):
        if self.wavelength_m <= 0:
            raise ConfigurationError("wavelength_m must be positive")
        if self.antenna_spacing_m <= 0:
            raise ConfigurationError("antenna_spacing_m must be positive")
        if self.bandwidth_hz <= 0:
            raise ConfigurationError("bandwidth_hz must be positive")
        if self.path_count < 1:
            raise ConfigurationError("path_count must be at least 1")
        if self.shadowing_std_db < 0:
            raise ConfigurationError("shadowing_std_db must be nonnegative")
        if self.max_tx_power_w <= 0:
            raise ConfigurationError("max_tx_power_w must be positive")
        n_rf = min(self.tx_rf_chains, self.rx_rf_chains)
        n_ant = min(self.tx_antennas, self.rx_antennas)
        if not (1 <= self.data_streams <= n_rf <= n_ant):
            raise ConfigurationError(
                "stream/chain/antenna counts must satisfy "
                "data_streams <= min(RF chains) <= min(antennas)"
            )

    def check_multipoint(self, transmitters: int):
        """Spatial multiplexing feasibility when several transmitters share one receiver."""
        if transmitters < 1:
            raise ConfigurationError("transmitter count must be at least 1")
        if self.rx_antennas < transmitters * self.tx_antennas:
            raise ConfigurationError(
                f"{transmitters} transmitters need rx_antennas >= "
                f"{transmitters * self.tx_antennas}, have {self.rx_antennas}"
            )


@dataclass
class CostParams:
    """Energy and deployment cost model coefficients.

    Gateway / SBS operating power is ``a * power_norm_w * rate / rate_norm_bps
    + b_w``; the embodied (manufacturing) energy is a fixed fraction of the
    whole lifetime energy, so E_EM = f/(1-f) * E_OP.
    """

    energy_price_per_kwh: float = 1.0
    gateway_capex_eur: float = 3900.0
    power_coeff_a: float = 7.84
    power_coeff_b_w: float = 71.5
    power_norm_w: float = 1.0
    rate_norm_bps: float = 1e9
    lifetime_hours: float = 5 * HOURS_PER_YEAR
    embodied_fraction: float = 0.2

    def validate(self):
        for name in (
            "energy_price_per_kwh",
            "gateway_capex_eur",
            "power_coeff_a",
            "power_coeff_b_w",
            "power_norm_w",
            "rate_norm_bps",
            "lifetime_hours",
        ):
            if getattr(self, name) <= 0:
                raise ConfigurationError(f"{name} must be positive")
        if not 0.0 <= self.embodied_fraction < 1.0:
            raise ConfigurationError("embodied_fraction must lie in [0, 1)")


@dataclass
class ScenarioConfig:
    """Full scenario description.

    Exactly one of ``expected_count`` (mean SBS number per macro cell, drives
    Poisson sampling) or ``count`` (fixed SBS number) may be set; with neither
    given, the scenario defaults to an expected count of 100 per macro cell.
    """

    radius_m: float = 500.0
    hop_range_m: float = 200.0
    expected_count: float | None = None
    count: int | None = None
    w_max_bps: float = 10e9
    w_self_bps: float = 0.0
    w_gateway_bps: float = 100e9
    w_avg_bps: float | None = None  # defaults to w_max_bps
    max_gateways: int = 10
    seed: int = 1
    epochs: int = 20
    reopt_period: int = 0  # 0 = optimise gateways once for the whole run
    channel: ChannelParams = field(default_factory=ChannelParams)
    cost: CostParams = field(default_factory=CostParams)

    def __post_init__(self):
        if self.w_avg_bps is None:
            self.w_avg_bps = self.w_max_bps
        if self.expected_count is None and self.count is None:
            self.expected_count = 100.0

    def validate(self):
        if not (self.radius_m > 0 and math.isfinite(self.radius_m)):
            raise ConfigurationError("radius_m must be positive and finite")
        if not (0 < self.hop_range_m <= 2 * self.radius_m):
            raise ConfigurationError("hop_range_m must lie in (0, 2*radius_m]")
        has_mu = self.expected_count is not None
        has_n = self.count is not None
        if has_mu == has_n:
            raise ConfigurationError("set exactly one of expected_count / count")
        if has_mu and self.expected_count < 0:
            raise ConfigurationError("expected_count must be nonnegative")
        if has_n and self.count < 0:
            raise ConfigurationError("count must be nonnegative")
        for name in ("w_max_bps", "w_self_bps", "w_gateway_bps", "w_avg_bps"):
            if getattr(self, name) < 0:
                raise ConfigurationError(f"{name} must be nonnegative")
        if self.w_max_bps > self.w_gateway_bps:
            raise ConfigurationError("w_max_bps must not exceed w_gateway_bps")
        if self.w_self_bps > self.w_gateway_bps:
            raise ConfigurationError("w_self_bps must not exceed w_gateway_bps")
        if self.max_gateways < 1:
            raise ConfigurationError("max_gateways must be at least 1")
        if self.epochs < 1:
            raise ConfigurationError("epochs must be at least 1")
        if self.reopt_period < 0:
            raise ConfigurationError("reopt_period must be nonnegative")
        self.channel.validate()
        self.cost.validate()
        return self


_SCENARIO_FIELDS = {
    "radius_m": float,
    "hop_range_m": float,
    "expected_count": float,
    "count": int,
    "w_max_bps": float,
    "w_self_bps": float,
    "w_gateway_bps": float,
    "w_avg_bps": float,
    "max_gateways": int,
    "seed": int,
    "epochs": int,
    "reopt_period": int,
}
_CHANNEL_FIELDS = {f.name: f.type for f in fields(ChannelParams)}
_COST_FIELDS = {f.name: f.type for f in fields(CostParams)}

#: keys accepted in a plain-text config file
CONFIG_KEYS = sorted(set(_SCENARIO_FIELDS) | set(_CHANNEL_FIELDS) | set(_COST_FIELDS))


def _parse_value(key: str, raw: str):
    if key in _SCENARIO_FIELDS:
        caster = _SCENARIO_FIELDS[key]
    elif key in _CHANNEL_FIELDS:
        caster = int if "count" in key or key.endswith(("antennas", "chains", "streams")) else float
    elif key in _COST_FIELDS:
        caster = float
    else:
        raise ConfigurationError(f"unknown configuration key: {key!r}")
    try:
        return caster(raw)
    except ValueError as exc:
        raise ConfigurationError(f"bad value for {key!r}: {raw!r}") from exc


def load_config(path) -> ScenarioConfig:
    """Read a ``key = value`` file (``#`` starts a comment) into a ScenarioConfig."""
    scenario_kv = {}
    channel_kv = {}
    cost_kv = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                raise ConfigurationError(f"{path}:{lineno}: expected 'key = value'")
            key, raw = (part.strip() for part in text.split("=", 1))
            value = _parse_value(key, raw)
            if key in _SCENARIO_FIELDS:
                scenario_kv[key] = value
            elif key in _CHANNEL_FIELDS:
                channel_kv[key] = value
            else:
                cost_kv[key] = value
    cfg = ScenarioConfig(
        channel=ChannelParams(**channel_kv), cost=CostParams(**cost_kv), **scenario_kv
    )
    cfg.validate()
    return cfg
