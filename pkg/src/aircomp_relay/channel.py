"""Node deployment and link-gain sampling.

Path loss follows a hybrid free-space / two-ray model; every node link sees
independent Rayleigh fading while the relay-to-sink link is fading-free by
default. Gains are stored as nonnegative amplitudes with receiver
amplification folded in, so that the solvers can work with a unit noise
power.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0


@dataclass(frozen=True)
class Topology:
    area_width: float
    area_height: float
    node_positions: np.ndarray  # (K, 2), meters
    sink_position: tuple[float, float]
    relay_position: tuple[float, float]

    def __post_init__(self):
        pos = np.asarray(self.node_positions, dtype=float)
        if pos.ndim != 2 or pos.shape[1] != 2 or pos.shape[0] < 1:
            raise ValueError("node_positions must have shape (K, 2) with K >= 1")
        object.__setattr__(self, "node_positions", pos)
        for name in ("sink_position", "relay_position"):
            p = getattr(self, name)
            object.__setattr__(self, name, (float(p[0]), float(p[1])))
        if self.sink_position == self.relay_position:
            raise ValueError("sink and relay must be at different positions")
        pts = np.vstack([pos, [self.sink_position, self.relay_position]])
        if (pts < 0).any() or (pts[:, 0] > self.area_width).any() or (
            pts[:, 1] > self.area_height
        ).any():
            raise ValueError("all positions must lie inside the deployment area")

    @property
    def n_nodes(self) -> int:
        return self.node_positions.shape[0]

    def distances_to(self, point) -> np.ndarray:
        return np.hypot(*(self.node_positions - np.asarray(point, dtype=float)).T)


@dataclass(frozen=True)
class ChannelParams:
    frequency: float = 2.4e9
    tx_antenna_height: float = 1.5
    rx_antenna_height: float = 1.5
    rx_gain_db: float = 90.0
    noise_power: float = 1.0
    fading_on_relay_sink_link: bool = False

    def __post_init__(self):
        if self.frequency <= 0:
            raise ValueError("frequency must be positive")
        if self.tx_antenna_height <= 0 or self.rx_antenna_height <= 0:
            raise ValueError("antenna heights must be positive")
        if self.noise_power <= 0:
            raise ValueError("noise_power must be positive")

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.frequency

    @property
    def crossover_distance(self) -> float:
        """Distance beyond which the two-ray model replaces free space."""
        return 4 * np.pi * self.tx_antenna_height * self.rx_antenna_height / self.wavelength

    @property
    def rx_gain_linear(self) -> float:
        return 10.0 ** (self.rx_gain_db / 10.0)


@dataclass(frozen=True)
class LinkGains:
    h_kd: np.ndarray
    h_kr: np.ndarray
    h_rd: float
    a_d1: float = field(default=0.0)  # slot-1 direct reception, unused by all policies

    def __post_init__(self):
        h_kd = np.asarray(self.h_kd, dtype=float).ravel()
        h_kr = np.asarray(self.h_kr, dtype=float).ravel()
        if h_kd.shape != h_kr.shape or h_kd.size < 1:
            raise ValueError("h_kd and h_kr must be nonempty and of equal length")
        if (h_kd < 0).any() or (h_kr < 0).any():
            raise ValueError("link gains must be nonnegative")
        if not self.h_rd > 0:
            raise ValueError("h_rd must be positive")
        object.__setattr__(self, "h_kd", h_kd)
        object.__setattr__(self, "h_kr", h_kr)
        object.__setattr__(self, "h_rd", float(self.h_rd))

    @property
    def n_nodes(self) -> int:
        return self.h_kd.size

    def to_csv(self) -> str:
        """Dump as CSV: a ``# h_rd=`` metadata line, a header, one row per node."""
        buf = io.StringIO()
        buf.write(f"# h_rd={self.h_rd:.12g}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["node_index", "h_kd", "h_kr"])
        for k, (d, r) in enumerate(zip(self.h_kd, self.h_kr)):
            w.writerow([k, f"{d:.12g}", f"{r:.12g}"])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "LinkGains":
        lines = text.splitlines()
        if not lines or not lines[0].startswith("# h_rd="):
            raise ValueError("missing '# h_rd=' metadata line")
        h_rd = float(lines[0].split("=", 1)[1])
        rows = list(csv.DictReader(lines[1:]))
        rows.sort(key=lambda r: int(r["node_index"]))
        return cls(
            h_kd=np.array([float(r["h_kd"]) for r in rows]),
            h_kr=np.array([float(r["h_kr"]) for r in rows]),
            h_rd=h_rd,
        )


def make_rng(seed) -> np.random.Generator:
    """PCG64 generator; ``seed`` may be an int or a tuple such as (master, trial)."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def generate_topology(seed, k, area=(400.0, 200.0), sink=(100.0, 100.0),
                      relay=(300.0, 100.0)) -> Topology:
    if k < 1:
        raise ValueError("k must be at least 1")
    width, height = float(area[0]), float(area[1])
    if width <= 0 or height <= 0:
        raise ValueError("area dimensions must be positive")
    rng = make_rng(seed)
    pos = rng.uniform(0.0, 1.0, size=(k, 2)) * [width, height]
    return Topology(width, height, pos, tuple(sink), tuple(relay))


def path_loss_linear(distance, params: ChannelParams):
    """Power gain of the hybrid free-space / two-ray model.

    Free space ``(lambda / (4 pi d))**2`` up to the crossover distance
    ``4 pi h_t h_r / lambda`` and ``(h_t h_r)**2 / d**4`` beyond it.
    Accepts scalars or arrays.
    """
    d = np.asarray(distance, dtype=float)
    if (d <= 0).any():
        raise ValueError("distance must be positive")
    lam = params.wavelength
    free_space = (lam / (4 * np.pi * d)) ** 2
    two_ray = (params.tx_antenna_height * params.rx_antenna_height) ** 2 / d**4
    out = np.where(d <= params.crossover_distance, free_space, two_ray)
    return float(out) if out.ndim == 0 else out


def rayleigh_magnitude(rng: np.random.Generator, size):
    # |g| for g ~ CN(0, 1), so E|g|^2 = 1
    g = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    return np.abs(g) / np.sqrt(2.0)


def sample_link_gains(topology: Topology, params: ChannelParams, rng) -> LinkGains:
    rng = make_rng(rng)
    g_rx = params.rx_gain_linear
    k = topology.n_nodes
    pl_kd = path_loss_linear(topology.distances_to(topology.sink_position), params)
    pl_kr = path_loss_linear(topology.distances_to(topology.relay_position), params)
    d_rd = float(np.hypot(topology.sink_position[0] - topology.relay_position[0],
                          topology.sink_position[1] - topology.relay_position[1]))
    pl_rd = path_loss_linear(d_rd, params)
    fade = rayleigh_magnitude(rng, (2, k))
    fade_rd = rayleigh_magnitude(rng, 1)[0] if params.fading_on_relay_sink_link else 1.0
    return LinkGains(
        h_kd=np.sqrt(g_rx * pl_kd) * fade[0],
        h_kr=np.sqrt(g_rx * pl_kr) * fade[1],
        h_rd=float(np.sqrt(g_rx * pl_rd) * fade_rd),
    )
