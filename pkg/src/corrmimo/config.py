"""Scenario configuration shared by the channel, simulation and CLI layers."""

import dataclasses
import enum
from dataclasses import dataclass, field
from functools import cached_property

from .errors import ConfigInvalid

RHO_MAX = 0.999
DEFAULT_SNR_GRID = (0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0)
DEFAULT_RHO_GRID = (0.0, 0.2, 0.4, 0.6, 0.8, 0.95)


class ChannelKind(str, enum.Enum):
    GAUSSIAN = "gaussian-kronecker"
    NAKAGAMI = "nakagami-kronecker"


class PowerSplit(str, enum.Enum):
    # total transmit SNR shared equally across the nt streams
    TOTAL = "per-stream-total"
    # every stream sees the full SNR (bare-SNR reading of the ZF formula)
    FULL = "per-stream-full"


def clamp_rho(rho):
    """Clamp ``rho`` into ``[0, RHO_MAX]``; returns ``(rho, warning or None)``.

    Values above 1 or below 0 are rejected rather than clamped.
    """
    if not 0.0 <= rho <= 1.0:
        raise ConfigInvalid("rho", f"{rho} outside [0, 1]")
    if rho > RHO_MAX:
        return RHO_MAX, f"rho={rho} clamped to {RHO_MAX} (correlation matrix singular at 1)"
    return float(rho), None


@dataclass(frozen=True)
class ScenarioConfig:
    nt: int = 2
    nr: int = 2
    m: float = 1.0
    kind: ChannelKind = ChannelKind.GAUSSIAN
    rho_tx: float = 0.0
    rho_rx: float = 0.0
    snr_db_grid: tuple = DEFAULT_SNR_GRID
    rho_grid: tuple = DEFAULT_RHO_GRID
    trials: int = 10_000
    seed: int = 0
    power_split: PowerSplit = PowerSplit.TOTAL
    cdf_level: float = 0.8
    warnings: tuple = field(default=(), compare=False)

    def __post_init__(self):
        set_ = object.__setattr__
        try:
            set_(self, "kind", ChannelKind(self.kind))
        except ValueError:
            raise ConfigInvalid("kind", f"unknown channel kind {self.kind!r}") from None
        try:
            set_(self, "power_split", PowerSplit(self.power_split))
        except ValueError:
            raise ConfigInvalid("power_split", f"unknown power split {self.power_split!r}") from None
        for name in ("nt", "nr", "trials", "seed"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int):
                if isinstance(v, float) and v.is_integer():
                    set_(self, name, int(v))
                else:
                    raise ConfigInvalid(name, f"must be an integer, got {v!r}")
        if self.nt < 1:
            raise ConfigInvalid("nt", "must be >= 1")
        if self.nr < 1:
            raise ConfigInvalid("nr", "must be >= 1")
        if self.nr < self.nt:
            raise ConfigInvalid("nr", f"nr={self.nr} < nt={self.nt}; zero forcing needs nr >= nt")
        if self.trials < 1:
            raise ConfigInvalid("trials", "must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigInvalid("seed", "must fit in 64 unsigned bits")
        if not float(self.m) >= 0.5:
            raise ConfigInvalid("m", f"fading figure {self.m} below 0.5")
        set_(self, "m", float(self.m))
        if not 0.0 < self.cdf_level < 1.0:
            raise ConfigInvalid("cdf_level", "must lie strictly between 0 and 1")
        notes = list(self.warnings)
        for name in ("rho_tx", "rho_rx"):
            v = float(getattr(self, name))
            if not 0.0 <= v <= 1.0:
                raise ConfigInvalid(name, f"{v} outside [0, 1]")
            set_(self, name, v)
        for name in ("snr_db_grid", "rho_grid"):
            grid = getattr(self, name)
            if isinstance(grid, (int, float)):
                grid = (grid,)
            grid = tuple(float(x) for x in grid)
            if not grid:
                raise ConfigInvalid(name, "grid must be non-empty")
            set_(self, name, grid)
        for r in self.rho_grid:
            if not 0.0 <= r <= 1.0:
                raise ConfigInvalid("rho_grid", f"{r} outside [0, 1]")
        for name in ("rho_tx", "rho_rx"):
            if getattr(self, name) > RHO_MAX:
                notes.append(f"{name}={getattr(self, name)} clamped to {RHO_MAX}")
        set_(self, "warnings", tuple(dict.fromkeys(notes)))

    @property
    def params(self):
        from .fading import NakagamiParams
        return NakagamiParams(self.m, 1.0)

    @cached_property
    def rtx(self):
        from .channel import exp_correlation
        return exp_correlation(self.nt, min(self.rho_tx, RHO_MAX))

    @cached_property
    def rrx(self):
        from .channel import exp_correlation
        return exp_correlation(self.nr, min(self.rho_rx, RHO_MAX))

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def to_dict(self):
        return {
            "nt": self.nt,
            "nr": self.nr,
            "m": self.m,
            "kind": self.kind.value,
            "rho_tx": self.rho_tx,
            "rho_rx": self.rho_rx,
            "snr_db_grid": list(self.snr_db_grid),
            "rho_grid": list(self.rho_grid),
            "trials": self.trials,
            "seed": self.seed,
            "power_split": self.power_split.value,
            "cdf_level": self.cdf_level,
        }

    @classmethod
    def from_dict(cls, data):
        known = {f.name for f in dataclasses.fields(cls)} - {"warnings"}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigInvalid(unknown[0], "unknown configuration key")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigInvalid("config", str(exc)) from None
