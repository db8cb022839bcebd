"""Experiment configuration: JSON ingestion, validation and defaults.

Precedence is CLI flags > config file > built-in defaults.  Unknown keys are
rejected so typos fail loudly.
"""

from __future__ import annotations

import copy
import dataclasses
import json
from dataclasses import dataclass

from .control import NOMINAL_PARAMS
from .metrics import GATE_ORDER
from .propagate import DEFAULT_STEPS_1Q, DEFAULT_STEPS_2Q, TimeGrid

DEFAULT_SEED = 20260808

_SWEEP_KEYS_1Q = {"lam", "eta4", "tau0"}
_SWEEP_KEYS_2Q = _SWEEP_KEYS_1Q | {"d1", "d2", "d3", "d4", "c4"}


class ConfigError(ValueError):
    """Configuration file or override is invalid."""


def _defaults() -> dict:
    return {
        "gates": list(GATE_ORDER),
        "steps": {"one_qubit": DEFAULT_STEPS_1Q, "two_qubit": DEFAULT_STEPS_2Q},
        "sweep_overrides": {},
        "t_phys_us": {"one_qubit": 1.0, "two_qubit": 5.0},
        "noise": {
            "power": 0.001,
            "sigma": 0.1,
            "tau_f": None,          # None -> per-system default (0.3 / 0.1)
            "realizations": 10,
            "seed": None,           # None -> master seed
            "f_clock_hz": 1.0e9,
        },
        "seed": DEFAULT_SEED,
        "out": None,
    }


def _check_keys(section: dict, allowed, path: str):
    unknown = set(section) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) {sorted(unknown)} in {path}")


def _merged(raw: dict) -> dict:
    cfg = _defaults()
    _check_keys(raw, cfg, "config root")
    for key, value in raw.items():
        if isinstance(cfg[key], dict) and key != "sweep_overrides":
            if not isinstance(value, dict):
                raise ConfigError(f"{key} must be an object")
            _check_keys(value, cfg[key], key)
            cfg[key].update(value)
        else:
            cfg[key] = copy.deepcopy(value)
    return cfg


def _validate(cfg: dict) -> None:
    for g in cfg["gates"]:
        if g not in GATE_ORDER:
            raise ConfigError(f"unknown gate {g!r} in gates")
    for key in ("one_qubit", "two_qubit"):
        steps = cfg["steps"][key]
        if not isinstance(steps, int) or steps < 1:
            raise ConfigError(f"steps.{key} must be a positive integer")
        if cfg["t_phys_us"][key] <= 0:
            raise ConfigError(f"t_phys_us.{key} must be > 0")
    nz = cfg["noise"]
    if nz["power"] < 0:
        raise ConfigError("noise.power must be >= 0")
    if nz["sigma"] <= 0:
        raise ConfigError("noise.sigma must be > 0")
    if nz["tau_f"] is not None and nz["tau_f"] <= 0:
        raise ConfigError("noise.tau_f must be > 0")
    if not isinstance(nz["realizations"], int) or nz["realizations"] < 1:
        raise ConfigError("noise.realizations must be a positive integer")
    if nz["f_clock_hz"] <= 0:
        raise ConfigError("noise.f_clock_hz must be > 0")
    for gname, over in cfg["sweep_overrides"].items():
        if gname not in GATE_ORDER:
            raise ConfigError(f"sweep_overrides for unknown gate {gname!r}")
        allowed = _SWEEP_KEYS_1Q if gname != "cphase" else _SWEEP_KEYS_2Q
        _check_keys(over, allowed, f"sweep_overrides.{gname}")


@dataclass(frozen=True)
class ExperimentConfig:
    gates: tuple
    steps: dict
    sweep_overrides: dict
    t_phys_us: dict
    noise: dict
    seed: int
    out: str | None = None

    def to_dict(self) -> dict:
        return {
            "gates": list(self.gates),
            "steps": dict(self.steps),
            "sweep_overrides": copy.deepcopy(self.sweep_overrides),
            "t_phys_us": dict(self.t_phys_us),
            "noise": dict(self.noise),
            "seed": self.seed,
            "out": self.out,
        }

    def params_for(self, gate_name: str):
        base = NOMINAL_PARAMS[gate_name]
        over = self.sweep_overrides.get(gate_name, {})
        return dataclasses.replace(base, **over) if over else base

    def grid_for(self, p) -> TimeGrid:
        steps = self.steps["one_qubit"] if p.qubits == 1 else self.steps["two_qubit"]
        return TimeGrid(p.tau0, steps)

    def t_phys_for(self, p) -> float:
        key = "one_qubit" if p.qubits == 1 else "two_qubit"
        return self.t_phys_us[key] * 1e-6

    def noise_seed(self) -> int:
        return self.seed if self.noise["seed"] is None else self.noise["seed"]


def config_from_dict(raw: dict) -> ExperimentConfig:
    cfg = _merged(raw)
    _validate(cfg)
    return ExperimentConfig(
        gates=tuple(cfg["gates"]),
        steps=cfg["steps"],
        sweep_overrides=cfg["sweep_overrides"],
        t_phys_us=cfg["t_phys_us"],
        noise=cfg["noise"],
        seed=cfg["seed"],
        out=cfg["out"],
    )


def default_config() -> ExperimentConfig:
    return config_from_dict({})


def load_config(path) -> ExperimentConfig:
    """Parse, default and validate a JSON config file; empty file = defaults."""
    with open(path, "r") as fh:
        text = fh.read()
    if not text.strip():
        return default_config()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    return config_from_dict(raw)


def apply_overrides(cfg: ExperimentConfig, *, gate=None, steps=None, seed=None,
                    realizations=None, out=None) -> ExperimentConfig:
    """Fold CLI flag values over a loaded config."""
    raw = cfg.to_dict()
    if gate is not None:
        raw["gates"] = [g.strip().lower() for g in gate]
    if steps is not None:
        raw["steps"] = {"one_qubit": steps, "two_qubit": steps}
    if seed is not None:
        raw["seed"] = seed
    if realizations is not None:
        raw["noise"]["realizations"] = realizations
    if out is not None:
        raw["out"] = out
    return config_from_dict(raw)
