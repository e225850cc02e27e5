"""Scenario configuration: defaults, YAML loading, validation."""

import dataclasses
from dataclasses import dataclass

import yaml

from .channel import ChannelParams
from .energy import EnergyParams
from .mac import (MAC_NAMES, CsmaConfig, LrwpanConfig, SmacConfig, TdmaConfig)
from .traffic import AlertPolicy, CbrConfig


@dataclass
class Scenario:
    """Flat scenario description; everything a run needs besides the seed."""

    name: str = "urban-exhaust"
    mac: str = "802.11"
    duration: float = 600.0

    # field layout
    area: float = 1000.0           # square side, meters
    station_spacing: float = 200.0
    stations: int = 25

    # vehicle / mobility
    vehicles: int = 1
    speed: float = 10.0            # m/s
    mobility_tick: float = 0.1     # s

    # traffic
    traffic_start: float = 10.0
    traffic_interval: float = 0.1
    payload_bytes: int = 512
    emission_profile: str = "dirty"   # "dirty" or "clean"

    # radio
    bitrate: float = 2e6
    tx_power: float = 2.0
    frequency: float = 914e6
    antenna_height: float = 1.5
    rx_range: float = 250.0
    cs_range: float = 550.0

    # energy (battery nodes only)
    initial_energy: float = 4700.0
    p_tx: float = 2.0
    p_rx: float = 1.0
    p_idle: float = 0.8
    p_sleep: float = 1e-4
    energy_sample: float = 1.0

    # per-protocol knobs with their own defaults
    smac_duty: float = 0.4
    smac_period: float = 1.5
    tdma_slot: float = 2.5e-3

    # ---- derived parameter bundles --------------------------------------
    def channel_params(self):
        return ChannelParams(
            tx_power=self.tx_power, frequency=self.frequency,
            height_tx=self.antenna_height, height_rx=self.antenna_height,
            bitrate=self.bitrate, rx_range=self.rx_range,
            cs_range=self.cs_range)

    def energy_params(self):
        return EnergyParams(initial=self.initial_energy, p_tx=self.p_tx,
                            p_rx=self.p_rx, p_idle=self.p_idle,
                            p_sleep=self.p_sleep)

    def cbr_config(self):
        return CbrConfig(interval=self.traffic_interval,
                         payload=self.payload_bytes,
                         start=self.traffic_start)

    def alert_policy(self):
        return AlertPolicy()

    def mac_configs(self, node_ids=()):
        return MacConfigs(
            csma=CsmaConfig(),
            lrwpan=LrwpanConfig(),
            smac=SmacConfig(duty=self.smac_duty, period=self.smac_period),
            tdma=TdmaConfig(
                slot=self.tdma_slot,
                data_slots=max(26, len(node_ids)),
                assignment={nid: i for i, nid in enumerate(node_ids)}),
        )


@dataclass
class MacConfigs:
    csma: CsmaConfig
    lrwpan: LrwpanConfig
    smac: SmacConfig
    tdma: TdmaConfig


def validate(scenario):
    """Return a list of 'field: problem' strings; empty means valid."""
    errors = []
    s = scenario
    if s.mac not in MAC_NAMES:
        errors.append(f"mac: {s.mac!r} is not one of {', '.join(MAC_NAMES)}")
    positive = ("duration", "area", "station_spacing", "speed",
                "mobility_tick", "traffic_interval", "payload_bytes",
                "bitrate", "tx_power", "frequency", "antenna_height",
                "rx_range", "cs_range", "initial_energy", "p_tx", "p_rx",
                "p_idle", "energy_sample", "smac_duty", "smac_period",
                "tdma_slot")
    for field in positive:
        if getattr(s, field) <= 0:
            errors.append(f"{field}: must be positive")
    if s.traffic_start < 0:
        errors.append("traffic_start: must be non-negative")
    if s.vehicles < 1:
        errors.append("vehicles: need at least one vehicle")
    if s.stations < 1:
        errors.append("stations: need at least one station")
    else:
        side = round(s.stations ** 0.5)
        if side * side != s.stations:
            errors.append(f"stations: {s.stations} is not a perfect square")
    if s.cs_range < s.rx_range:
        errors.append("cs_range: must be >= rx_range")
    if not 0 < s.smac_duty < 1:
        errors.append("smac_duty: must lie strictly between 0 and 1")
    if s.emission_profile not in ("dirty", "clean"):
        errors.append(f"emission_profile: {s.emission_profile!r} "
                      "is not 'dirty' or 'clean'")
    if s.p_sleep < 0 or not s.p_sleep < s.p_idle <= s.p_rx:
        errors.append("p_sleep/p_idle/p_rx: expected 0 <= p_sleep < p_idle <= p_rx")
    if s.traffic_start >= s.duration:
        errors.append("traffic_start: lies at or past the end of the run")
    return errors


_FIELD_NAMES = {f.name for f in dataclasses.fields(Scenario)}


def scenario_from_mapping(data):
    """Build a Scenario from a plain dict, rejecting unknown keys."""
    if not isinstance(data, dict):
        raise ValueError("scenario file must contain a mapping")
    unknown = sorted(set(data) - _FIELD_NAMES)
    if unknown:
        raise ValueError(f"unknown scenario keys: {', '.join(unknown)}")
    return Scenario(**data)


def load_scenario(path):
    """Load a scenario from a YAML file and validate it."""
    with open(path) as fh:
        data = yaml.safe_load(fh) or {}
    scenario = scenario_from_mapping(data)
    errors = validate(scenario)
    if errors:
        raise ValueError("invalid scenario:\n  " + "\n  ".join(errors))
    return scenario
