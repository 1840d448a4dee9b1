"""Configuration loader for feasimap.toml."""

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

try:
    import tomllib
except ImportError:
    import tomli as tomllib  # noqa: F401

from .acquisition import AcquisitionKind
from .errors import ConfigError
from .problems import PROBLEMS
from .search import LHS_ONLY

CONFIG_NAME = "feasimap.toml"
OUTPUT_ENV = "FEASIMAP_OUT"

DEFAULT_PROBLEMS = ["g4", "g8", "g9", "g19", "g24"]
METHODS = [LHS_ONLY] + [kind.value for kind in AcquisitionKind]


@dataclass
class GpSettings:
    """Hyperparameter fitting."""
    restarts: int = 10
    jitter_start: float = 1e-10
    jitter_max: float = 1e-4


@dataclass
class OptimizerSettings:
    """BIPOP-CMA-ES acquisition search."""
    initial_sigma: float = 0.3
    max_restarts: int = 9
    popsize_factor: float = 2.0


@dataclass
class AcquisitionSettings:
    pbe_entropy_floor: float | None = None
    pbe_positive_entropy: bool = True


@dataclass
class SearchSettings:
    """Initial design size (times n) and duplicate detection."""
    init_multiplier: int = 1
    duplicate_tolerance: float = 1e-8


@dataclass
class CampaignConfig:
    """Complete campaign configuration."""
    problems: list[str] = field(default_factory=lambda: list(DEFAULT_PROBLEMS))
    methods: list[str] = field(default_factory=lambda: list(METHODS))
    reps: int = 21
    validation_samples: int = 10_000
    budget_multiplier: int = 11
    acq_eval_multiplier: int = 5000
    master_seed: int = 0
    output_dir: Path = Path("results")
    workers: int = field(default_factory=lambda: os.cpu_count() or 1)
    gp: GpSettings = field(default_factory=GpSettings)
    optimizer: OptimizerSettings = field(default_factory=OptimizerSettings)
    acquisition: AcquisitionSettings = field(default_factory=AcquisitionSettings)
    search: SearchSettings = field(default_factory=SearchSettings)

    def validate(self) -> None:
        unknown = [p for p in self.problems if p not in PROBLEMS]
        if unknown:
            raise ConfigError(f"Unknown problem(s): {', '.join(unknown)}")
        bad = [m for m in self.methods if m not in METHODS]
        if bad:
            raise ConfigError(f"Unknown method(s): {', '.join(bad)} (known: {', '.join(METHODS)})")
        if not self.problems or not self.methods:
            raise ConfigError("At least one problem and one method are required")
        if self.reps < 1:
            raise ConfigError(f"reps must be >= 1, got {self.reps}")
        for name in ("budget_multiplier", "acq_eval_multiplier"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.search.init_multiplier < 1:
            raise ConfigError("search.init_multiplier must be >= 1")
        if self.search.init_multiplier > self.budget_multiplier:
            raise ConfigError("search.init_multiplier cannot exceed budget_multiplier")
        if self.validation_samples < 1:
            raise ConfigError("validation_samples must be >= 1")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")


def _table(toml_data: dict[str, Any], name: str) -> dict[str, Any]:
    value = toml_data.get(name, {})
    if not isinstance(value, dict):
        raise ConfigError(f"[{name}] must be a table")
    return value


def load_config(config_path: Path | None = None) -> CampaignConfig:
    """
    Load configuration from feasimap.toml.

    Search order:
    1. config_path (if provided; must exist)
    2. cwd/feasimap.toml

    A missing file yields all defaults. ``FEASIMAP_OUT`` overrides output_dir.

    Args:
        config_path: Explicit path to config file

    Returns:
        Validated CampaignConfig
    """
    toml_data: dict[str, Any] = {}

    if config_path is not None and not config_path.exists():
        raise ConfigError(f"Config file not found: {config_path}")
    search_paths = [p for p in (config_path, Path.cwd() / CONFIG_NAME) if p is not None]
    for path in search_paths:
        if path.exists():
            try:
                with open(path, "rb") as f:
                    toml_data = tomllib.load(f)
            except tomllib.TOMLDecodeError as e:
                raise ConfigError(f"Invalid TOML in {path}: {e}") from e
            break

    defaults = CampaignConfig()
    gp_data = _table(toml_data, "gp")
    opt_data = _table(toml_data, "optimizer")
    acq_data = _table(toml_data, "acquisition")
    search_data = _table(toml_data, "search")

    floor = acq_data.get("pbe_entropy_floor")
    positive = acq_data.get("pbe_positive_entropy", True)
    if not isinstance(positive, bool):
        raise ConfigError(f"pbe_positive_entropy must be true or false, got {positive!r}")
    try:
        config = CampaignConfig(
            problems=[str(p) for p in toml_data.get("problems", defaults.problems)],
            methods=[str(m) for m in toml_data.get("methods", defaults.methods)],
            reps=int(toml_data.get("reps", defaults.reps)),
            validation_samples=int(
                toml_data.get("validation_samples", defaults.validation_samples)
            ),
            budget_multiplier=int(toml_data.get("budget_multiplier", defaults.budget_multiplier)),
            acq_eval_multiplier=int(
                toml_data.get("acq_eval_multiplier", defaults.acq_eval_multiplier)
            ),
            master_seed=int(toml_data.get("master_seed", defaults.master_seed)),
            output_dir=Path(toml_data.get("output_dir", defaults.output_dir)),
            workers=int(toml_data.get("workers", defaults.workers)),
            gp=GpSettings(
                restarts=int(gp_data.get("restarts", 10)),
                jitter_start=float(gp_data.get("jitter_start", 1e-10)),
                jitter_max=float(gp_data.get("jitter_max", 1e-4)),
            ),
            optimizer=OptimizerSettings(
                initial_sigma=float(opt_data.get("initial_sigma", 0.3)),
                max_restarts=int(opt_data.get("max_restarts", 9)),
                popsize_factor=float(opt_data.get("popsize_factor", 2.0)),
            ),
            acquisition=AcquisitionSettings(
                pbe_entropy_floor=None if floor is None else float(floor),
                pbe_positive_entropy=positive,
            ),
            search=SearchSettings(
                init_multiplier=int(search_data.get("init_multiplier", 1)),
                duplicate_tolerance=float(search_data.get("duplicate_tolerance", 1e-8)),
            ),
        )
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Invalid config value: {e}") from e

    env_out = os.environ.get(OUTPUT_ENV)
    if env_out:
        config.output_dir = Path(env_out)

    config.validate()
    return config
