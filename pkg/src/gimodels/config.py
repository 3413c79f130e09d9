"""
Run configuration loaded from config.toml.

Values are read once into frozen dataclasses. The TOML path defaults to
config.toml in the working directory and can be redirected with the
GIMODELS_CONFIG environment variable (a .env file is honoured).
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

from dotenv import load_dotenv

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

PathLike = Union[str, Path]

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_NAME = "config.toml"


@dataclass(frozen=True)
class TaperConfig:
    kind: str = "cosine-bell"
    fraction: float = 0.1


@dataclass(frozen=True)
class FitConfig:
    tolerance: float = 1e-6
    max_cycles: int = 1000
    grid: Optional[int] = None
    demean: bool = True
    taper: TaperConfig = field(default_factory=TaperConfig)


@dataclass(frozen=True)
class SelectConfig:
    p_min: int = 1
    p_max: int = 3
    max_vertices: int = 5
    jobs: int = 1
    bic_literal: bool = False
    within: float = 2.0
    top: int = 0


@dataclass(frozen=True)
class SimulateConfig:
    T: int = 2000
    seed: int = 0
    burnin: Optional[int] = None


@dataclass(frozen=True)
class LoggingConfig:
    level: str = "INFO"
    log_dir: str = "logs"
    to_file: bool = False


@dataclass(frozen=True)
class RunConfig:
    fit: FitConfig = field(default_factory=FitConfig)
    select: SelectConfig = field(default_factory=SelectConfig)
    simulate: SimulateConfig = field(default_factory=SimulateConfig)
    logging: LoggingConfig = field(default_factory=LoggingConfig)
    bandwidth: int = 11
    source: Optional[Path] = None


def _build(cfg: dict, source: Optional[Path]) -> RunConfig:
    f_cfg = cfg.get("fit", {})
    t_cfg = cfg.get("taper", {})
    s_cfg = cfg.get("select", {})
    sim_cfg = cfg.get("simulate", {})
    l_cfg = cfg.get("logging", {})

    taper = TaperConfig(
        kind=str(t_cfg.get("kind", "cosine-bell")),
        fraction=float(t_cfg.get("fraction", 0.1)),
    )
    grid = f_cfg.get("grid")
    fit = FitConfig(
        tolerance=float(f_cfg.get("tolerance", 1e-6)),
        max_cycles=int(f_cfg.get("max_cycles", 1000)),
        grid=int(grid) if grid is not None else None,
        demean=bool(f_cfg.get("demean", True)),
        taper=taper,
    )
    select = SelectConfig(
        p_min=int(s_cfg.get("p_min", 1)),
        p_max=int(s_cfg.get("p_max", 3)),
        max_vertices=int(s_cfg.get("max_vertices", 5)),
        jobs=int(s_cfg.get("jobs", 1)),
        bic_literal=bool(s_cfg.get("bic_literal", False)),
        within=float(s_cfg.get("within", 2.0)),
        top=int(s_cfg.get("top", 0)),
    )
    burnin = sim_cfg.get("burnin")
    simulate = SimulateConfig(
        T=int(sim_cfg.get("T", 2000)),
        seed=int(sim_cfg.get("seed", 0)),
        burnin=int(burnin) if burnin is not None else None,
    )
    log_cfg = LoggingConfig(
        level=str(l_cfg.get("level", "INFO")),
        log_dir=str(l_cfg.get("log_dir", "logs")),
        to_file=bool(l_cfg.get("to_file", False)),
    )
    return RunConfig(
        fit=fit,
        select=select,
        simulate=simulate,
        logging=log_cfg,
        bandwidth=int(cfg.get("spectra", {}).get("bandwidth", 11)),
        source=source,
    )


def load_config(config_path: Optional[PathLike] = None) -> RunConfig:
    """
    Load parameters from a TOML config file.

    Resolution order: explicit path, then $GIMODELS_CONFIG, then
    ./config.toml. A missing default file yields built-in defaults; a missing
    explicitly requested file raises FileNotFoundError.
    """
    load_dotenv()
    explicit = config_path or os.environ.get("GIMODELS_CONFIG")
    path = Path(explicit) if explicit else Path(DEFAULT_CONFIG_NAME)

    if not path.exists():
        if explicit:
            raise FileNotFoundError(f"Config file not found: {path}")
        logger.debug(f"No {DEFAULT_CONFIG_NAME} found, using built-in defaults")
        return RunConfig()

    with open(path, "rb") as f:  # tomllib requires binary mode
        cfg = tomllib.load(f)
    logger.debug(f"Loaded configuration from {path}")
    return _build(cfg, path)
