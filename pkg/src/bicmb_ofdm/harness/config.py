"""Experiment configuration: a flat YAML file with list values, fully echoed on every run."""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from fractions import Fraction
from functools import cached_property
from pathlib import Path

import yaml

from ..channel import TapProfile
from ..codec import CodeSpec, standard_code
from ..phy import Constellation, LinkConfig

__all__ = ["ConfigError", "ExperimentConfig", "dump_config", "load_config"]

MODES = ("ber", "pep", "analyze", "correlate")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    mode: str = "ber"
    seed: int = 1
    out: str = "results"
    workers: int = 1
    # link
    N_t: int = 2
    N_r: int = 2
    S: int = 1
    L: int = 2
    M: int = 64
    L_cp: int = 16
    code_rate: str | None = None  # "1/4", "1/2", "2/3" or "4/5"; default "1/2"
    generators: list[str] | None = None
    puncture: list[list[int]] | None = None
    qam_order: int = 4
    profile: str = "equal"
    exp_decay_db: float = -7.0
    grouping: bool = False
    block_bits: int = 1024
    snr_db: list[float] = field(default_factory=lambda: [0.0, 5.0, 10.0, 15.0, 20.0])
    # BER stop rule
    target_errors: int = 200
    min_blocks: int = 100  # independent channel draws before the error target may stop a point
    max_trials: int = 10_000_000
    chunk_blocks: int = 16
    slope_window_db: list[float] | None = None
    # PEP
    alpha: list[list[int]] | None = None
    subcarriers: list[int] | None = None
    pep_trials: int = 1_000_000
    pep_method: str = "is"
    # analysis
    max_dH: int | None = None

    def __post_init__(self):
        try:
            self._validate()
        except ConfigError:
            raise
        except (TypeError, ValueError) as err:
            raise ConfigError(str(err)) from err

    def _validate(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        for name in ("seed", "workers", "N_t", "N_r", "S", "L", "M", "L_cp", "qam_order",
                     "block_bits", "target_errors", "min_blocks", "max_trials", "chunk_blocks", "pep_trials"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int):
                raise ConfigError(f"{name} must be an integer, got {v!r}")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.target_errors < 1 or self.max_trials < 1 or self.chunk_blocks < 1:
            raise ConfigError("target_errors, max_trials and chunk_blocks must be positive")
        if self.min_blocks < 0:
            raise ConfigError("min_blocks must be non-negative")
        if not isinstance(self.grouping, bool):
            raise ConfigError("grouping must be true or false")
        if self.profile not in ("equal", "exponential"):
            raise ConfigError("profile must be 'equal' or 'exponential'")
        if not self.snr_db:
            raise ConfigError("snr_db must be a non-empty list")
        object.__setattr__(self, "snr_db", [float(s) for s in self.snr_db])
        if self.code_rate is not None and self.generators is not None:
            raise ConfigError("give at most one of code_rate or generators")
        if self.generators is None:
            object.__setattr__(self, "code_rate", str(self.code_rate or "1/2"))
        if self.pep_method not in ("is", "taps"):
            raise ConfigError("pep_method must be 'is' or 'taps'")
        if self.mode == "pep" and self.alpha is None:
            raise ConfigError("pep mode needs an alpha matrix")
        # build derived objects once so bad combinations fail here
        self.code  # noqa: B018
        self.link  # noqa: B018

    @cached_property
    def code(self) -> CodeSpec:
        if self.generators is not None:
            return CodeSpec.from_octal(*self.generators, puncture=self.puncture)
        return standard_code(self.code_rate)

    @cached_property
    def tap_profile(self) -> TapProfile:
        if self.profile == "equal":
            return TapProfile.equal(self.L)
        return TapProfile.exponential(self.L, self.exp_decay_db)

    @cached_property
    def link(self) -> LinkConfig:
        return LinkConfig(
            N_t=self.N_t, N_r=self.N_r, S=self.S, L=self.L, M=self.M, L_cp=self.L_cp,
            code=self.code, constellation=Constellation(self.qam_order),
            profile=self.tap_profile, grouping=self.grouping,
            snr_grid_db=tuple(self.snr_db), block_bits=self.block_bits,
        )

    def resolved(self) -> dict:
        """Every field with defaults materialized, plus the effective code."""
        d = {f.name: getattr(self, f.name) for f in fields(self)}
        code = self.code
        d["resolved_code"] = {
            "generators_octal": code.octal(),
            "constraint_length": code.constraint_length,
            "puncture": [list(r) for r in code.pattern.tolist()],
            "rate": str(Fraction(code.rate)),
        }
        d["resolved_profile"] = {
            "powers": list(self.tap_profile.powers),
            "delays": list(self.tap_profile.delays),
        }
        return d

    def with_overrides(self, **kw) -> "ExperimentConfig":
        kw = {k: v for k, v in kw.items() if v is not None}
        return replace(self, **kw)


def load_config(path=None, **overrides) -> ExperimentConfig:
    """Read a YAML config (optional) and apply non-``None`` overrides."""
    data = {}
    if path is not None:
        p = Path(path)
        try:
            text = p.read_text()
        except OSError as err:
            raise ConfigError(f"cannot read config {p}: {err}") from err
        try:
            data = yaml.safe_load(text) or {}
        except yaml.YAMLError as err:
            raise ConfigError(f"malformed config {p}: {err}") from err
        if not isinstance(data, dict):
            raise ConfigError("config must be a mapping of keys to values")
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    data.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig(**data)


def dump_config(cfg: ExperimentConfig) -> str:
    return yaml.safe_dump(cfg.resolved(), sort_keys=False, default_flow_style=None)

