"""
Run configuration: defaults file, JSON run files, command-line flags and the
worker cap from the environment.
"""

import copy
import json
import logging
import os
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from core.errors import ConfigError

logger = logging.getLogger(__name__)

DEFAULTS_PATH = os.path.join(os.path.dirname(os.path.dirname(__file__)), "config", "defaults.json")
THREADS_ENV = "GRHS_LAB_THREADS"
COMMANDS = ("verify", "construct", "geodesic", "gallery", "oracle", "probe")

FALLBACK_DEFAULTS: Dict[str, Any] = {
    "tolerances": {"closed_form": 1e-8, "numerical": 1e-6},
    "grid": {
        "count": 101,
        "shrink": 0.01,
        "xi_span": [-5.0, 5.0],
        "zeta_span": [-5.0, 5.0],
        "domain_offset": 0.1,
    },
    "oracle": {
        "steps": [1e-3, 5e-4],
        "points": 5,
        "max_error": 1e-5,
        "ratio_range": [3.0, 5.0],
        "exact_below": 1e-9,
    },
    "geodesic": {
        "s_max": 1000.0,
        "tol": 1e-10,
        "count": 50,
        "sampler": "generic",
        "system": "levi-civita",
        "method": "DOP853",
        "collapse": 1e-12,
        "divergence": 1e12,
        "max_steps": 1000000,
    },
    "case": {"n": 3, "m": 3},
    "seed": 0,
}


def load_defaults(path: Optional[str] = None) -> Dict[str, Any]:
    """Load defaults from JSON, falling back to the built-in values."""
    path = path or DEFAULTS_PATH
    try:
        with open(path, "r") as f:
            loaded = json.load(f)
    except Exception as e:
        logger.warning(f"Using built-in defaults ({path}: {e})")
        return copy.deepcopy(FALLBACK_DEFAULTS)
    merged = copy.deepcopy(FALLBACK_DEFAULTS)
    for key, value in loaded.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key].update(value)
        else:
            merged[key] = value
    return merged


def worker_count(requested: Optional[int] = None) -> int:
    """Requested workers (default: CPU count) capped by GRHS_LAB_THREADS."""
    workers = requested or os.cpu_count() or 1
    cap = os.environ.get(THREADS_ENV)
    if cap:
        try:
            cap_value = int(cap)
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {cap!r}")
        if cap_value < 1:
            raise ConfigError(f"{THREADS_ENV} must be >= 1, got {cap_value}")
        workers = min(workers, cap_value)
    return max(1, workers)


def parse_grid(text: str) -> Tuple[float, float, int]:
    """Parse 'a:b:count'."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid must look like a:b:count, got {text!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError(f"grid must look like a:b:count, got {text!r}")
    if not lo < hi or count < 1:
        raise ConfigError(f"grid needs a < b and count >= 1, got {text!r}")
    return lo, hi, count


@dataclass
class RunConfig:
    """One command invocation with everything it needs."""
    command: str
    out: str = "out"
    gallery: Optional[str] = None
    variant: Optional[str] = None
    overrides: Dict[str, Any] = field(default_factory=dict)
    case_id: Optional[int] = None
    case_params: Dict[str, Any] = field(default_factory=dict)
    sign: Optional[str] = None
    tol: Optional[float] = None
    grid: Optional[Tuple[float, float, int]] = None
    steps: List[float] = field(default_factory=list)
    s_max: Optional[float] = None
    count: Optional[int] = None
    sampler: Optional[str] = None
    system: Optional[str] = None
    init: Optional[Dict[str, List[float]]] = None
    seed: int = 0
    workers: int = 1
    defaults: Dict[str, Any] = field(default_factory=lambda: copy.deepcopy(FALLBACK_DEFAULTS), repr=False)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"Unknown command '{self.command}', choose from {list(COMMANDS)}")
        if self.tol is not None and not self.tol > 0.0:
            raise ConfigError(f"tolerance must be positive, got {self.tol}")
        if any(not s > 0.0 for s in self.steps):
            raise ConfigError(f"steps must be positive, got {self.steps}")
        if self.s_max is not None and not self.s_max > 0.0:
            raise ConfigError(f"s_max must be positive, got {self.s_max}")
        if self.count is not None and self.count < 1:
            raise ConfigError(f"count must be >= 1, got {self.count}")
        if self.sign is not None and self.sign not in ("+", "-"):
            raise ConfigError(f"sign must be '+' or '-', got {self.sign!r}")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.gallery is not None and (self.case_id is not None or self.case_params):
            raise ConfigError("give either a gallery entry or case parameters, not both")
        if self.init is not None:
            if set(self.init) != {"position", "velocity"}:
                raise ConfigError("init needs exactly 'position' and 'velocity'")

    def geodesic_setting(self, key: str) -> Any:
        explicit = {"s_max": self.s_max, "count": self.count, "sampler": self.sampler, "system": self.system}
        if explicit.get(key) is not None:
            return explicit[key]
        if key == "tol" and self.tol is not None:
            return self.tol
        return self.defaults["geodesic"][key]

    def to_json(self) -> Dict[str, Any]:
        out = asdict(self)
        out.pop("defaults")
        out.pop("workers")
        if self.grid is not None:
            out["grid"] = list(self.grid)
        return out


_FILE_KEYS = {
    "command", "out", "gallery", "variant", "overrides", "case_id", "case_params", "sign",
    "tol", "grid", "steps", "s_max", "count", "sampler", "system", "init", "seed",
}


def read_run_file(path: str) -> Dict[str, Any]:
    """Read a JSON run file; unknown keys are rejected."""
    if not os.path.isfile(path):
        raise ConfigError(f"config file not found: {path}")
    try:
        with open(path, "r") as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read config {path}: {e}")
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    unknown = sorted(set(data) - _FILE_KEYS)
    if unknown:
        raise ConfigError(f"Unknown config keys in {path}: {unknown}")
    return data


def build_run_config(flags: Dict[str, Any], defaults: Optional[Dict[str, Any]] = None) -> RunConfig:
    """
    Merge a run file (flags['config']) with command-line flags.

    Args:
        flags: parsed flags; None values do not override the file
        defaults: loaded defaults

    Returns:
        RunConfig
    """
    defaults = defaults or load_defaults()
    data: Dict[str, Any] = {}
    if flags.get("config"):
        data.update(read_run_file(flags["config"]))
    for key, value in flags.items():
        if key == "config" or value is None:
            continue
        if key == "steps" and not value:
            continue
        data[key] = value

    if isinstance(data.get("grid"), str):
        data["grid"] = parse_grid(data["grid"])
    elif data.get("grid") is not None:
        grid = data["grid"]
        if len(grid) != 3:
            raise ConfigError(f"grid must be [a, b, count], got {grid}")
        data["grid"] = parse_grid(f"{grid[0]}:{grid[1]}:{grid[2]}")
    data.setdefault("seed", defaults.get("seed", 0))
    try:
        data["seed"] = int(data["seed"])
        if data.get("tol") is not None:
            data["tol"] = float(data["tol"])
        data["steps"] = [float(s) for s in data.get("steps", [])]
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Invalid numeric setting: {e}")
    if "command" not in data:
        raise ConfigError("no command given")
    return RunConfig(workers=worker_count(), defaults=defaults, **data)
