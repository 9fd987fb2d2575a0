import json
from pathlib import Path

import numpy as np
import pytest

from defect_nls.models.spectral import DefectParams, SpectralPoint

CONFIG_DIR = Path(__file__).parent.parent / "configs"


def random_points(n: int, seed: int = 0, min_gap: float = 0.3) -> list[SpectralPoint]:
    """Well-separated upper half-plane points with moderate, generic inits."""
    rng = np.random.default_rng(seed)
    points: list[SpectralPoint] = []
    while len(points) < n:
        lam = complex(rng.uniform(-1.0, 1.0), rng.uniform(0.5, 1.2))
        if any(abs(lam - p.lam) < min_gap for p in points):
            continue
        init = tuple(
            complex(rng.uniform(0.5, 2.0) * np.exp(1j * rng.uniform(-np.pi, np.pi))) for _ in range(2)
        )
        points.append(SpectralPoint(lam=lam, init=init))
    return points


@pytest.fixture(name="params")
def params_fixture():
    """Defect with α = 0, β = 1 on the plus branch."""
    return DefectParams(alpha=0.0, beta=1.0)


@pytest.fixture(name="unit_point")
def unit_point_fixture():
    """Stationary soliton λ = i with init (1, 1), centred at the origin."""
    return SpectralPoint(lam=1j, init=(1, 1))


@pytest.fixture(name="config_dir")
def config_dir_fixture():
    return CONFIG_DIR


@pytest.fixture(name="base_config")
def base_config_fixture():
    """Minimal defect-nsoliton configuration as a JSON-ready dict."""
    return {
        "mode": "defect-nsoliton",
        "defect": {"alpha": 0.0, "beta": 1.0, "branch": "plus"},
        "solitons": [{"lambda": [1.0, 1.0], "init": [[1.0, 0.0], [1.0, 0.0]]}],
        "grid": {"t": [-1.0, 1.0, 5], "x": [-2.0, 2.0, 9]},
        "seed_note": "zero",
    }


@pytest.fixture(name="write_config")
def write_config_fixture(tmp_path):
    """Write a config dict to a temporary JSON file and return its path."""

    def write(data: dict, name: str = "run.json") -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return path

    return write
