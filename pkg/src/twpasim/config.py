"""Run configuration: strict JSON with unit-suffixed keys, resolved to SI at load time."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

from .circuit import LineParams, ResonatorParams
from .errors import ConfigError, DomainError

# key suffix -> SI multiplier
_UNITS = {"um": 1e-6, "pH": 1e-12, "fF": 1e-15, "pF": 1e-12, "uA": 1e-6, "GHz": 1e9}

_SCHEMA = {
    "line": ({"a_um", "C_J_fF", "C_g_fF", "n_cells"}, {"L_J0_pH", "I_c_uA"}),
    "resonator": ({"C_c_fF", "L_r_pH", "C_r_pF"}, set()),
    "pump": ({"f_GHz", "I_over_Ic"}, set()),
    "signal": (set(), {"f_GHz", "I_over_Ip"}),
    "sweep": ({"f_s_min_GHz", "f_s_max_GHz", "n_points"}, set()),
    "cme": (set(), {"n_steps"}),
    "quantum": (set(), {"kappa_max", "N_max", "alpha", "n_kappa"}),
    "output": (set(), {"directory", "formats"}),
}
_REQUIRED_SECTIONS = {"line", "pump"}
_FORMATS = {"csv", "json", "svg"}


@dataclass
class RunConfig:
    """Resolved configuration (SI units, angular frequencies in rad/s)."""

    line: LineParams
    resonator: Optional[ResonatorParams]
    omega_p: float
    I_p_over_Ic: float
    omega_s: float = 2 * math.pi * 5.0e9
    I_s_over_Ip: float = 0.01
    f_s_min: float = 3e9
    f_s_max: float = 9e9
    n_points: int = 601
    n_steps: int = 40000
    kappa_max: float = 3.0
    N_max: int = 40
    alpha: float = 1.0
    n_kappa: int = 31
    directory: str = "twpa-out"
    formats: list = field(default_factory=lambda: ["csv"])

    @property
    def I_p(self) -> float:
        return self.I_p_over_Ic * self.line.I_c

    @property
    def I_s(self) -> float:
        return self.I_s_over_Ip * self.I_p

    def sweep_omegas(self):
        import numpy as np
        return 2 * math.pi * np.linspace(self.f_s_min, self.f_s_max, self.n_points)

    def to_si_dict(self) -> dict:
        """Normalised SI echo of the resolved configuration."""
        line = self.line
        out = {
            "line": {"a_m": line.a, "L_J0_H": line.L_J0, "I_c_A": line.I_c, "C_J_F": line.C_J,
                     "C_g_F": line.C_g, "n_cells": line.n_cells, "length_m": line.length},
            "resonator": None,
            "pump": {"omega_rad_s": self.omega_p, "I_A": self.I_p},
            "signal": {"omega_rad_s": self.omega_s, "I_A": self.I_s},
            "sweep": {"f_s_min_Hz": self.f_s_min, "f_s_max_Hz": self.f_s_max, "n_points": self.n_points},
            "cme": {"n_steps": self.n_steps},
            "quantum": {"kappa_max": self.kappa_max, "N_max": self.N_max, "alpha": self.alpha,
                        "n_kappa": self.n_kappa},
            "output": {"directory": self.directory, "formats": list(self.formats)},
        }
        if self.resonator is not None:
            r = self.resonator
            out["resonator"] = {"C_c_F": r.C_c, "L_r_H": r.L_r, "C_r_F": r.C_r}
        return out


def _si(key: str, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{key} must be a number, got {value!r}")
    suffix = key.rsplit("_", 1)[-1]
    return float(value) * _UNITS.get(suffix, 1.0)


def _section(doc, name):
    sec = doc.get(name)
    required, optional = _SCHEMA[name]
    if sec is None:
        return None
    if not isinstance(sec, dict):
        raise ConfigError(f"section '{name}' must be an object")
    unknown = set(sec) - required - optional
    if unknown:
        raise ConfigError(f"unknown key(s) in '{name}': {', '.join(sorted(unknown))}")
    missing = required - set(sec)
    if missing:
        raise ConfigError(f"missing key(s) in '{name}': {', '.join(sorted(missing))}")
    return sec


def parse_config(doc: dict, base_dir: Optional[Path] = None) -> RunConfig:
    """Validate a decoded JSON document and resolve it to a :class:`RunConfig`."""
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a JSON object")
    unknown = set(doc) - set(_SCHEMA)
    if unknown:
        raise ConfigError(f"unknown section(s): {', '.join(sorted(unknown))}")
    for name in _REQUIRED_SECTIONS:
        if name not in doc:
            raise ConfigError(f"missing section '{name}'")
    ln = _section(doc, "line")
    if ("L_J0_pH" in ln) == ("I_c_uA" in ln):
        raise ConfigError("line: give exactly one of L_J0_pH or I_c_uA")
    n_cells = ln["n_cells"]
    if isinstance(n_cells, bool) or not isinstance(n_cells, int):
        raise ConfigError(f"line.n_cells must be an integer, got {n_cells!r}")
    try:
        line = LineParams.build(
            a=_si("a_um", ln["a_um"]), C_J=_si("C_J_fF", ln["C_J_fF"]), C_g=_si("C_g_fF", ln["C_g_fF"]),
            n_cells=n_cells,
            L_J0=_si("L_J0_pH", ln["L_J0_pH"]) if "L_J0_pH" in ln else None,
            I_c=_si("I_c_uA", ln["I_c_uA"]) if "I_c_uA" in ln else None,
        )
        rs = _section(doc, "resonator")
        res = None if rs is None else ResonatorParams(
            C_c=_si("C_c_fF", rs["C_c_fF"]), L_r=_si("L_r_pH", rs["L_r_pH"]), C_r=_si("C_r_pF", rs["C_r_pF"]))
    except DomainError as exc:
        raise ConfigError(f"line/resonator: {exc}") from exc

    pump = _section(doc, "pump")
    f_p = _si("f_GHz", pump["f_GHz"])
    cfg = RunConfig(line=line, resonator=res, omega_p=2 * math.pi * f_p,
                    I_p_over_Ic=_si("I_over_Ic", pump["I_over_Ic"]))
    if not (f_p > 0 and 2 * math.pi * f_p < line.cutoff):
        raise ConfigError(f"pump.f_GHz = {pump['f_GHz']} lies outside the propagating band")
    if not cfg.I_p_over_Ic > 0:
        raise ConfigError("pump.I_over_Ic must be > 0")

    sig = _section(doc, "signal")
    if sig is not None:
        if "f_GHz" in sig:
            cfg.omega_s = 2 * math.pi * _si("f_GHz", sig["f_GHz"])
        if "I_over_Ip" in sig:
            cfg.I_s_over_Ip = _si("I_over_Ip", sig["I_over_Ip"])
        if not (cfg.omega_s > 0 and cfg.I_s_over_Ip >= 0):
            raise ConfigError("signal: frequency must be > 0 and I_over_Ip >= 0")

    sw = _section(doc, "sweep")
    if sw is not None:
        cfg.f_s_min = _si("f_s_min_GHz", sw["f_s_min_GHz"])
        cfg.f_s_max = _si("f_s_max_GHz", sw["f_s_max_GHz"])
        n = sw["n_points"]
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise ConfigError(f"sweep.n_points must be a positive integer, got {n!r}")
        cfg.n_points = n
        if not (0 < cfg.f_s_min and (cfg.f_s_max > cfg.f_s_min or (n == 1 and cfg.f_s_max == cfg.f_s_min))):
            raise ConfigError("sweep grid must be non-empty and ascending (0 < f_s_min_GHz < f_s_max_GHz)")

    cm = _section(doc, "cme")
    if cm is not None and "n_steps" in cm:
        n = cm["n_steps"]
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise ConfigError(f"cme.n_steps must be a positive integer, got {n!r}")
        cfg.n_steps = n

    q = _section(doc, "quantum")
    if q is not None:
        if "kappa_max" in q:
            cfg.kappa_max = _si("kappa_max", q["kappa_max"])
            if cfg.kappa_max < 0:
                raise ConfigError("quantum.kappa_max must be >= 0")
        for key in ("N_max", "n_kappa"):
            if key in q:
                v = q[key]
                if isinstance(v, bool) or not isinstance(v, int) or v < 1:
                    raise ConfigError(f"quantum.{key} must be a positive integer, got {v!r}")
                setattr(cfg, key, v)
        if "alpha" in q:
            cfg.alpha = _si("alpha", q["alpha"])

    out = _section(doc, "output")
    if out is not None:
        if "directory" in out:
            if not isinstance(out["directory"], str) or not out["directory"]:
                raise ConfigError("output.directory must be a non-empty string")
            d = Path(out["directory"])
            if base_dir is not None and not d.is_absolute():
                d = base_dir / d
            cfg.directory = str(d)
        if "formats" in out:
            fm = out["formats"]
            if not isinstance(fm, list) or not set(fm) <= _FORMATS:
                raise ConfigError(f"output.formats must be a list drawn from {sorted(_FORMATS)}")
            cfg.formats = list(dict.fromkeys(fm))
    return cfg


def load_config(path) -> RunConfig:
    """Read and resolve a JSON configuration file.

    Relative output directories are taken relative to the config file.
    """
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return parse_config(doc, base_dir=path.parent)


def default_config_path() -> Path:
    """Path of the shipped default configuration (operating point of the reference device)."""
    return Path(str(resources.files("twpasim") / "data" / "default_config.json"))
