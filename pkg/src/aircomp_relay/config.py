"""Experiment configuration: INI-style sections with strict validation."""

from __future__ import annotations

import configparser
import dataclasses
import io
import os
from dataclasses import dataclass, field, fields
from pathlib import Path

from .channel import ChannelParams


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ScenarioConfig:
    n_nodes: int = 50
    area_width: float = 400.0
    area_height: float = 200.0
    sink: tuple[float, float] = (100.0, 100.0)
    relay: tuple[float, float] = (300.0, 100.0)
    frequency: float = 2.4e9
    tx_antenna_height: float = 1.5
    rx_antenna_height: float = 1.5
    rx_gain_db: float = 90.0
    fading_on_relay_sink_link: bool = False


@dataclass(frozen=True)
class PowerConfig:
    p_max: float = 10.0
    sigma2: float = 1.0


@dataclass(frozen=True)
class PolicyConfig:
    relay_fraction: float = 0.3
    gamma: float = 1.0
    theta: float = 0.5
    delta_fraction: float = 0.01  # descent step as a fraction of the initial a'_r1
    grid_size: int = 200
    grid_low: float = 0.05
    grid_high: float = 0.995


@dataclass(frozen=True)
class HarnessConfig:
    trial_count: int = 2000
    master_seed: int = 1
    workers: int = 1
    paper_scale: bool = False  # 10,000 trials

    @property
    def effective_trials(self) -> int:
        return 10_000 if self.paper_scale else self.trial_count


@dataclass(frozen=True)
class OutputConfig:
    directory: str = "results"
    experiment_id: str = "run"
    formats: tuple[str, ...] = ("csv", "json")


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: ScenarioConfig = field(default_factory=ScenarioConfig)
    power: PowerConfig = field(default_factory=PowerConfig)
    policy: PolicyConfig = field(default_factory=PolicyConfig)
    harness: HarnessConfig = field(default_factory=HarnessConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    def __post_init__(self):
        validate(self)

    def channel_params(self) -> ChannelParams:
        s = self.scenario
        return ChannelParams(
            frequency=s.frequency,
            tx_antenna_height=s.tx_antenna_height,
            rx_antenna_height=s.rx_antenna_height,
            rx_gain_db=s.rx_gain_db,
            # link sampling ignores the noise power; sigma2 = 0 stays legal for solver checks
            noise_power=self.power.sigma2 if self.power.sigma2 > 0 else 1.0,
            fading_on_relay_sink_link=s.fading_on_relay_sink_link,
        )

    def replace(self, section: str, **changes) -> "ExperimentConfig":
        sub = dataclasses.replace(getattr(self, section), **changes)
        return dataclasses.replace(self, **{section: sub})

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


_SECTIONS = {f.name: f.default_factory for f in fields(ExperimentConfig)}
_FORMATS = {"csv", "json"}


def _fail(section, key, msg):
    raise ConfigError(f"{section}.{key}: {msg}")


def validate(cfg: ExperimentConfig) -> None:
    s, p, q, h, o = cfg.scenario, cfg.power, cfg.policy, cfg.harness, cfg.output
    if s.n_nodes < 1:
        _fail("scenario", "n_nodes", "must be at least 1")
    for key in ("area_width", "area_height", "frequency", "tx_antenna_height",
                "rx_antenna_height"):
        if not getattr(s, key) > 0:
            _fail("scenario", key, "must be positive")
    for key in ("sink", "relay"):
        x, y = getattr(s, key)
        if not (0 <= x <= s.area_width and 0 <= y <= s.area_height):
            _fail("scenario", key, "must lie inside the area")
    if tuple(s.sink) == tuple(s.relay):
        _fail("scenario", "relay", "must differ from sink")
    if not p.p_max > 0:
        _fail("power", "p_max", "must be positive")
    if not p.sigma2 >= 0:
        _fail("power", "sigma2", "must be nonnegative")
    if not 0 <= q.relay_fraction <= 1:
        _fail("policy", "relay_fraction", "must lie in [0, 1]")
    if not q.gamma > 0:
        _fail("policy", "gamma", "must be positive")
    if not 0 <= q.theta <= 1:
        _fail("policy", "theta", "must lie in [0, 1]")
    if not 0 < q.delta_fraction < 1:
        _fail("policy", "delta_fraction", "must lie in (0, 1)")
    if q.grid_size < 1:
        _fail("policy", "grid_size", "must be at least 1")
    if not 0 < q.grid_low <= q.grid_high < 1:
        _fail("policy", "grid_low", "need 0 < grid_low <= grid_high < 1")
    if h.trial_count < 1:
        _fail("harness", "trial_count", "must be at least 1")
    if h.master_seed < 0:
        _fail("harness", "master_seed", "must be nonnegative")
    if h.workers < 1:
        _fail("harness", "workers", "must be at least 1")
    bad = set(o.formats) - _FORMATS
    if bad:
        _fail("output", "formats", f"unknown format(s) {sorted(bad)}")
    if not o.experiment_id or any(c in o.experiment_id for c in "/\\ "):
        _fail("output", "experiment_id", "must be a nonempty name without separators")


def _parse_value(raw: str, typ, where):
    raw = raw.strip()
    try:
        if typ is bool:
            low = raw.lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        if typ is int:
            return int(raw)
        if typ is float:
            return float(raw)
        if typ is str:
            return raw
        if typ == "point":
            parts = [float(x) for x in raw.split(",")]
            if len(parts) != 2:
                raise ValueError(raw)
            return tuple(parts)
        if typ == "strlist":
            return tuple(x.strip() for x in raw.split(",") if x.strip())
    except ValueError:
        raise ConfigError(f"{where}: cannot parse {raw!r}") from None
    raise TypeError(typ)


def _field_kind(section_cls, name):
    t = {f.name: f.type for f in fields(section_cls)}[name]
    return {"int": int, "float": float, "bool": bool, "str": str,
            "tuple[float, float]": "point", "tuple[str, ...]": "strlist"}[t]


def _format_value(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, tuple):
        return ", ".join(_format_value(x) for x in v)
    return str(v)


def parse_config(source=None) -> ExperimentConfig:
    """Parse a config from a path or inline INI text; omitted keys take defaults."""
    if source is None:
        text = ""
    elif isinstance(source, os.PathLike) or (
        isinstance(source, str) and "\n" not in source and "=" not in source
        and source.strip() and os.path.isfile(source)
    ):
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
    else:
        text = source

    cp = configparser.ConfigParser(interpolation=None, default_section="__none__")
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None

    sections = {}
    for name in cp.sections():
        if name not in _SECTIONS:
            raise ConfigError(f"unknown section [{name}]")
        default = _SECTIONS[name]()
        cls = type(default)
        known = {f.name for f in fields(cls)}
        values = {}
        for key, raw in cp.items(name):
            if key not in known:
                raise ConfigError(f"{name}.{key}: unknown key")
            values[key] = _parse_value(raw, _field_kind(cls, key), f"{name}.{key}")
        sections[name] = dataclasses.replace(default, **values)
    return ExperimentConfig(**sections)


def dump_config(cfg: ExperimentConfig) -> str:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    for section in _SECTIONS:
        sub = getattr(cfg, section)
        cp[section] = {f.name: _format_value(getattr(sub, f.name)) for f in fields(sub)}
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()
