"""
Configuration management for HHLCircuits.
Handles algorithm parameters, sweep grids, environment overrides and validation.
"""

import os
import logging
import math
from dataclasses import dataclass
from typing import Optional
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

logger = logging.getLogger(__name__)

INVERSION_MODES = ("exact_arcsin", "small_angle")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")

# Below this the small-angle constant C = 2^-r * pi exceeds the smallest eigenvalue 1
R_MIN_RECOMMENDED = math.log2(2 * math.pi)


class ConfigurationError(ValueError):
    """Raised when required configuration is missing or invalid."""
    pass


@dataclass
class HHLConfig:
    """Parameters of one HHL run."""
    n_clock: int = 2  # Clock register size
    t0: float = 2 * math.pi  # Evolution time; clock value l encodes 2*pi*l/t0
    C: Optional[float] = None  # None = smallest representable eigenvalue (exact mode)
    inversion_mode: str = "exact_arcsin"  # exact_arcsin or small_angle
    r: Optional[float] = None  # small_angle only: C = 2^-r * pi
    signed_eigenvalues: bool = False  # Read the clock as two's complement


@dataclass
class SweepConfig:
    """Grid of r values for the example sweep."""
    r_min: float = 2.0
    r_max: float = 8.0
    steps: int = 25


@dataclass
class RuntimeConfig:
    """Process-level settings taken from the environment."""
    sweep_workers: int = 1
    log_level: str = "INFO"


def validate_hhl_config(config: HHLConfig) -> None:
    """
    Check an HHLConfig for values no run can use.

    Raises:
        ConfigurationError: If any field is out of range.
    """
    problems = []
    if not isinstance(config.n_clock, int) or config.n_clock < 1:
        problems.append(f"n_clock must be a positive integer, got {config.n_clock!r}")
    if not (config.t0 > 0 and math.isfinite(config.t0)):
        problems.append(f"t0 must be positive and finite, got {config.t0!r}")
    if config.inversion_mode not in INVERSION_MODES:
        problems.append(
            f"unknown inversion mode {config.inversion_mode!r}, "
            f"valid options: {list(INVERSION_MODES)}"
        )
    if config.inversion_mode == "small_angle":
        if config.r is None:
            problems.append("small_angle mode requires r")
        elif not (config.r > 0 and math.isfinite(config.r)):
            problems.append(f"r must be positive and finite, got {config.r!r}")
    if config.C is not None and not (config.C > 0 and math.isfinite(config.C)):
        problems.append(f"C must be positive and finite, got {config.C!r}")

    if problems:
        raise ConfigurationError("Invalid HHL configuration: " + "; ".join(problems))


def get_hhl_config(
    n_clock: int = 2,
    t0: float = 2 * math.pi,
    C: Optional[float] = None,
    inversion_mode: str = "exact_arcsin",
    r: Optional[float] = None,
    signed_eigenvalues: bool = False,
) -> HHLConfig:
    """
    Build and validate an HHLConfig.

    Args:
        n_clock: Number of clock qubits.
        t0: Evolution time of the phase estimation.
        C: Rotation constant for exact_arcsin mode.
        inversion_mode: exact_arcsin or small_angle.
        r: Small-angle exponent, C = 2^-r * pi.
        signed_eigenvalues: Interpret the clock register as signed.

    Returns:
        HHLConfig instance.

    Raises:
        ConfigurationError: If the combination is invalid.
    """
    config = HHLConfig(
        n_clock=n_clock,
        t0=t0,
        C=C,
        inversion_mode=inversion_mode,
        r=r,
        signed_eigenvalues=signed_eigenvalues,
    )
    validate_hhl_config(config)

    if config.inversion_mode == "small_angle":
        if config.C is not None:
            logger.warning(
                f"C={config.C} is ignored in small_angle mode; "
                f"C is set by r={config.r}"
            )
            config.C = None
        if config.r < R_MIN_RECOMMENDED:
            logger.warning(
                f"r={config.r:.4g} is below log2(2*pi)={R_MIN_RECOMMENDED:.4g}; "
                "the small-angle approximation is poor in this range"
            )
    elif config.r is not None:
        logger.warning(f"r={config.r} is ignored in exact_arcsin mode")

    return config


def validate_sweep_config(config: SweepConfig) -> None:
    """
    Check that a sweep grid is usable.

    Raises:
        ConfigurationError: If the grid is empty or reversed.
    """
    if not (config.r_min > 0 and math.isfinite(config.r_min)):
        raise ConfigurationError(f"r_min must be positive, got {config.r_min!r}")
    if not (config.r_max > config.r_min and math.isfinite(config.r_max)):
        raise ConfigurationError(
            f"r_max must exceed r_min, got r_min={config.r_min!r}, r_max={config.r_max!r}"
        )
    if not isinstance(config.steps, int) or config.steps < 2:
        raise ConfigurationError(f"steps must be an integer >= 2, got {config.steps!r}")


def get_sweep_config(
    r_min: float = 2.0,
    r_max: float = 8.0,
    steps: int = 25,
) -> SweepConfig:
    """
    Build and validate a SweepConfig.

    Returns:
        SweepConfig instance.

    Raises:
        ConfigurationError: If the grid is invalid.
    """
    config = SweepConfig(r_min=r_min, r_max=r_max, steps=steps)
    validate_sweep_config(config)
    return config


def get_runtime_config() -> RuntimeConfig:
    """
    Load runtime settings from the environment.

    Reads HHLSIM_SWEEP_WORKERS and HHLSIM_LOG_LEVEL; both are optional.

    Returns:
        RuntimeConfig instance.

    Raises:
        ConfigurationError: If a variable is set to an unusable value.
    """
    config = RuntimeConfig()

    workers = os.getenv("HHLSIM_SWEEP_WORKERS")
    if workers:
        try:
            config.sweep_workers = int(workers)
        except ValueError:
            raise ConfigurationError(
                f"HHLSIM_SWEEP_WORKERS must be an integer, got {workers!r}"
            )
        if config.sweep_workers < 1:
            raise ConfigurationError(
                f"HHLSIM_SWEEP_WORKERS must be >= 1, got {config.sweep_workers}"
            )

    level = os.getenv("HHLSIM_LOG_LEVEL")
    if level:
        level = level.upper()
        if level not in LOG_LEVELS:
            logger.warning(
                f"Invalid log level '{level}'. Using 'INFO'. "
                f"Valid options: {list(LOG_LEVELS)}"
            )
            level = "INFO"
        config.log_level = level

    return config
