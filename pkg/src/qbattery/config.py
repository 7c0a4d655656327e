"""Flat JSON run configuration.

Example::

    {"omega_a": 1.0, "omega_b": 1.0, "g": 0.16, "drive_amplitude": 0.1,
     "drive_frequency": 0.84, "gamma_a": 0.05, "lamb_shift": 0.0,
     "n_thermal": 0.0, "t_final": 200.0, "dt": 0.01, "engine": "meanfield",
     "fock_cutoff_a": 10, "fock_cutoff_b": 10}

The six core physical keys are required; the rest default as below.
Unknown keys are rejected so that typos do not silently fall back to defaults.
"""

from __future__ import annotations

import json
import numbers
from dataclasses import dataclass
from pathlib import Path

from .errors import ValidationError
from .model import SystemParams, validate

REQUIRED_KEYS = ("omega_a", "omega_b", "g", "drive_amplitude", "drive_frequency", "gamma_a")
DEFAULTS = {
    "lamb_shift": 0.0,
    "n_thermal": 0.0,
    "t_final": 200.0,
    "dt": 0.01,
    "engine": "meanfield",
    "fock_cutoff_a": 10,
    "fock_cutoff_b": 10,
}
ALLOWED_KEYS = frozenset(REQUIRED_KEYS) | frozenset(DEFAULTS)
ENGINES = ("meanfield", "liouville")


@dataclass(frozen=True)
class RunConfig:
    params: SystemParams
    t_final: float = 200.0
    dt: float = 0.01
    engine: str = "meanfield"
    fock_cutoff_a: int = 10
    fock_cutoff_b: int = 10


def _number(key, value) -> float:
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise ValidationError(f"{key}: expected a number, got {value!r}")
    return float(value)


def _cutoff(key, value) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ValidationError(f"{key}: expected an integer >= 1, got {value!r}")
    return value


def config_from_dict(raw: dict) -> RunConfig:
    if not isinstance(raw, dict):
        raise ValidationError("configuration must be a JSON object")
    unknown = sorted(set(raw) - ALLOWED_KEYS)
    if unknown:
        raise ValidationError(f"unknown configuration key(s): {', '.join(unknown)}")
    missing = [k for k in REQUIRED_KEYS if k not in raw]
    if missing:
        raise ValidationError(f"missing configuration key(s): {', '.join(missing)}")
    values = {**DEFAULTS, **raw}

    params = SystemParams(
        omega_a=_number("omega_a", values["omega_a"]),
        omega_b=_number("omega_b", values["omega_b"]),
        g=_number("g", values["g"]),
        drive_amplitude=_number("drive_amplitude", values["drive_amplitude"]),
        drive_frequency=_number("drive_frequency", values["drive_frequency"]),
        gamma_a=_number("gamma_a", values["gamma_a"]),
        lamb_shift=_number("lamb_shift", values["lamb_shift"]),
        n_thermal=_number("n_thermal", values["n_thermal"]),
    )
    validate(params)
    engine = values["engine"]
    if engine not in ENGINES:
        raise ValidationError(f"engine must be one of {ENGINES}, got {engine!r}")
    return RunConfig(
        params=params,
        t_final=_number("t_final", values["t_final"]),
        dt=_number("dt", values["dt"]),
        engine=engine,
        fock_cutoff_a=_cutoff("fock_cutoff_a", values["fock_cutoff_a"]),
        fock_cutoff_b=_cutoff("fock_cutoff_b", values["fock_cutoff_b"]),
    )


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read configuration {path}: {exc.strerror or exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc})") from exc
    return config_from_dict(raw)
