"""Runtime wiring helper for the CLI."""

import logging
import sys
from dataclasses import dataclass
from pathlib import Path

from .adapters.fs_store import CampaignStore
from .config import CampaignConfig, load_config

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


@dataclass
class Runtime:
    """Container for all wired components."""
    config: CampaignConfig
    store: CampaignStore


def configure_logging(verbosity: int = 0) -> None:
    """-1 (quiet) -> WARNING, 0 -> INFO, 1+ -> DEBUG, one stderr handler on the package logger."""
    level = logging.WARNING if verbosity < 0 else logging.DEBUG if verbosity > 0 else logging.INFO
    logger = logging.getLogger("feasimap")
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    logger.addHandler(handler)
    logger.setLevel(level)
    logger.propagate = False


def build_runtime(
    config_path: Path | None = None,
    output_dir: Path | None = None,
    workers: int | None = None,
) -> Runtime:
    """Load configuration and apply CLI overrides, which win over file and environment."""
    config = load_config(config_path=config_path)

    if output_dir is not None:
        config.output_dir = output_dir
    if workers is not None:
        config.workers = workers
    config.validate()

    return Runtime(config=config, store=CampaignStore(config.output_dir))
