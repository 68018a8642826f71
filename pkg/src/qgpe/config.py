"""Experiment configuration: a flat JSON document with strict validation.

Unknown keys are rejected.  ``d`` defaults to the depth schedule
100/200/400 for n = 7/8/9 and must be given explicitly for other n;
``d_local`` defaults to d/2 and may only be d/2 (half depth) or d (full
depth).  ``local_budget`` is a positive iteration count or "converge".
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields

from .exceptions import ConfigurationError

MODES = ("full", "dd", "classical_dd", "newton", "dla", "variance", "compare")
POTENTIALS = ("one_minus_cos",)
DEPTH_SCHEDULE = {7: 100, 8: 200, 9: 400}
CONVERGE = "converge"


@dataclass
class ExperimentConfig:
    mode: str
    n: int = 7
    d: int | None = None
    d_local: int | None = None
    kappa: float = 1.0
    sweeps: int = 16
    local_budget: int | str = 50
    max_full_iters: int = 300
    cost_ratio: float = 8.0
    seed: int = 0
    output_dir: str = "."
    potential: str = "one_minus_cos"
    num_samples: int = 200
    record_walltime: bool = False

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigurationError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.potential not in POTENTIALS:
            raise ConfigurationError(
                f"potential must be one of {POTENTIALS}, got {self.potential!r}"
            )
        self.n = _as_int("n", self.n, minimum=2)
        self.sweeps = _as_int("sweeps", self.sweeps, minimum=1)
        self.max_full_iters = _as_int("max_full_iters", self.max_full_iters, minimum=1)
        self.num_samples = _as_int("num_samples", self.num_samples, minimum=2)
        self.seed = _as_int("seed", self.seed, minimum=0)
        self.kappa = float(self.kappa)
        self.cost_ratio = float(self.cost_ratio)
        if self.cost_ratio <= 0:
            raise ConfigurationError(f"cost_ratio must be positive, got {self.cost_ratio}")
        if not isinstance(self.record_walltime, bool):
            raise ConfigurationError("record_walltime must be a boolean")
        if isinstance(self.local_budget, str):
            if self.local_budget != CONVERGE:
                raise ConfigurationError(
                    f"local_budget must be a positive integer or '{CONVERGE}'"
                )
        else:
            self.local_budget = _as_int("local_budget", self.local_budget, minimum=1)
        if self.mode == "compare" and isinstance(self.local_budget, str):
            raise ConfigurationError(
                "compare mode needs an integer local_budget for budget matching"
            )
        if self.d is not None:
            self.d = _as_int("d", self.d, minimum=0)
        if self.d_local is not None:
            self.d_local = _as_int("d_local", self.d_local, minimum=0)
        if self.mode in ("full", "dd", "classical_dd", "compare", "variance"):
            self.resolve_depth()
        if self.mode in ("dd", "compare"):
            self.resolve_local_depth()

    def resolve_depth(self) -> int:
        if self.d is not None:
            return self.d
        if self.n in DEPTH_SCHEDULE:
            return DEPTH_SCHEDULE[self.n]
        raise ConfigurationError(
            f"no default depth for n={self.n}; set 'd' explicitly"
        )

    def resolve_local_depth(self) -> int:
        d = self.resolve_depth()
        if self.d_local is None:
            if d % 2:
                raise ConfigurationError(f"d={d} is odd; set 'd_local' explicitly")
            return d // 2
        if self.d_local not in (d // 2, d):
            raise ConfigurationError(
                f"d_local must be d/2={d // 2} or d={d}, got {self.d_local}"
            )
        return self.d_local


def _as_int(name: str, value, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigurationError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise ConfigurationError(f"{name} must be >= {minimum}, got {value}")
    return value


def config_from_dict(raw: dict) -> ExperimentConfig:
    if not isinstance(raw, dict):
        raise ConfigurationError("config document must be a JSON object")
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = set(raw) - known
    if unknown:
        raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
    if "mode" not in raw:
        raise ConfigurationError("config is missing the required key 'mode'")
    return ExperimentConfig(**raw)


def parse_config(path) -> ExperimentConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config {path} is not valid JSON: {exc}") from exc
    return config_from_dict(raw)


def config_to_dict(cfg: ExperimentConfig) -> dict:
    return asdict(cfg)


def budget_match(full_iters: int, local_budget: int, num_subdomains: int, cost_ratio: float) -> int:
    """Sweep count matching a full-domain iteration budget.

    sweeps = round(full_iters * cost_ratio / (num_subdomains * local_budget));
    e.g. 300 full iterations at cost ratio 8 with 3 x 50 local steps -> 16.
    """
    return int(round(full_iters * cost_ratio / (num_subdomains * local_budget)))
