from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


def get_version() -> str:
    """Read version from version.txt file"""
    version_file = Path(__file__).parent.parent / "version.txt"
    if version_file.exists():
        return version_file.read_text().strip()
    return "0.1.0"


class Settings(BaseSettings):
    """Process-wide numerical and runtime settings.

    Every field can be overridden from the environment with the
    ``DEFECT_NLS_`` prefix, e.g. ``DEFECT_NLS_THREADS=4``.
    """

    model_config = SettingsConfigDict(env_prefix="DEFECT_NLS_")

    APP_NAME: str = "defect-nls"
    APP_VERSION: str = get_version()
    APP_DESCRIPTION: str = "N-soliton solutions of the focusing NLS equation with an integrable defect."
    LOG_LEVEL: str = "WARNING"

    # Grid evaluation worker cap, 0 means one per CPU
    THREADS: int = Field(default=0, ge=0)

    SINGULAR_EPS: float = 1e-14
    DENSE_MAX_DIM: int = 64
    FD_STEP: float = 1e-3
    IM_THETA_CAP: float = 700.0
    REAL_AXIS_EPS: float = 1e-6
    MIN_LAMBDA_GAP: float = 1e-8
    MIN_BETA: float = 1e-9
    OMEGA_SLACK: float = 1e-10
    BRANCH_PROBE_T: float = 50.0
    MAX_GRID_NODES: int = 10_000_000
    PEAK_SEARCH_STEP: float = 0.02


settings = Settings()
