"""Small helpers shared across the package: phase wrapping, worker counts and
logging setup."""

import logging
import math
import os

import numpy as np


def wrap_phase(phi: float) -> float:
    """Map an angle to its principal value in (-π, π].

    Args:
        phi: Angle in radians

    Returns:
        The equivalent angle in (-π, π]; -π itself maps to π
    """
    return math.pi - (math.pi - phi) % (2.0 * math.pi)


def mean_phase(phases) -> float:
    """Circular mean of a collection of angles, wrapped to (-π, π]."""
    return wrap_phase(float(np.angle(np.sum(np.exp(1j * np.asarray(phases, dtype=float))))))


def resolve_threads(requested: int) -> int:
    """Number of grid workers to use.

    Args:
        requested: Configured cap; 0 means one worker per CPU

    Returns:
        A positive worker count
    """
    if requested > 0:
        return requested
    return os.cpu_count() or 1


def configure_logging(level: str = "WARNING") -> None:
    """Configure the root logger once for command-line use."""
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
