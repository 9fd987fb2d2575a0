"""Run configuration loading.

Three stages, each with its own error type: JSON syntax (ParseError with line
and column), schema (SchemaViolation naming the field path, e.g.
``solitons[0].lambda``), and domain invariants (InvariantViolation, same
path convention).
"""

import json
import logging
from pathlib import Path

from pydantic import ValidationError

from defect_nls.config import settings
from defect_nls.engine.defect import lambda0
from defect_nls.errors import (
    DefectNLSError,
    DuplicateEigenvalue,
    InvariantViolation,
    IoError,
    ParseError,
    RealEigenvalue,
    SchemaViolation,
    ZeroVector,
)
from defect_nls.models.schemas import CHECK_NAMES, Axis, Mode, RunConfig, as_init
from defect_nls.models.spectral import DressingChain, SpectralPoint

logger = logging.getLogger(__name__)


def field_path(loc) -> str:
    """Render a pydantic error location as ``a.b[0].c``."""
    path = ""
    for part in loc:
        if isinstance(part, int):
            path += f"[{part}]"
        else:
            path += f".{part}" if path else str(part)
    return path


def parse_config(path) -> RunConfig:
    """Read, validate and invariant-check a JSON run configuration.

    Args:
        path: Location of the JSON file

    Returns:
        Validated RunConfig

    Raises:
        IoError: If the file cannot be read
        ParseError: If the file is not well-formed JSON
        SchemaViolation: If the document does not match the schema
        InvariantViolation: If a value breaks a domain invariant
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return config_from_dict(data)


def config_from_dict(data) -> RunConfig:
    """Validate an already-decoded configuration document."""
    try:
        cfg = RunConfig.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        raise SchemaViolation(first["msg"], field=field_path(first["loc"])) from exc
    check_invariants(cfg)
    logger.info("loaded %s config with %d soliton(s)", cfg.mode.value, len(cfg.solitons))
    return cfg


def _check_axis(name: str, axis: Axis) -> None:
    lo, hi, n = axis
    if not lo < hi:
        raise InvariantViolation(f"min {lo} must be below max {hi}", field=f"grid.{name}")
    if n < 2:
        raise InvariantViolation(f"needs at least 2 nodes, got {n}", field=f"grid.{name}")


def _check_points(cfg: RunConfig) -> list[SpectralPoint]:
    points = []
    for k, soliton in enumerate(cfg.solitons):
        try:
            points.append(soliton.to_point())
        except RealEigenvalue as exc:
            raise InvariantViolation(exc.detail, field=f"solitons[{k}].lambda") from exc
        except ZeroVector as exc:
            raise InvariantViolation(exc.detail, field=f"solitons[{k}].init") from exc
        except DefectNLSError as exc:
            raise InvariantViolation(exc.detail, field=f"solitons[{k}]") from exc
    for k in range(len(points)):
        try:
            DressingChain(points=tuple(points[: k + 1]))
        except DuplicateEigenvalue as exc:
            raise InvariantViolation(exc.detail, field=f"solitons[{k}].lambda") from exc
    return points


def check_invariants(cfg: RunConfig) -> None:
    """Domain checks the schema cannot express.

    Raises:
        InvariantViolation: Naming the offending field
    """
    _check_axis("t", cfg.grid.t)
    _check_axis("x", cfg.grid.x)
    if cfg.grid.nt * cfg.grid.nx > settings.MAX_GRID_NODES:
        raise InvariantViolation(
            f"{cfg.grid.nt * cfg.grid.nx} nodes exceed the cap {settings.MAX_GRID_NODES}", field="grid"
        )

    unknown = sorted((set(cfg.verify.checks or ()) | set(cfg.verify.tolerances)) - set(CHECK_NAMES))
    if unknown:
        raise InvariantViolation(f"unknown check(s): {', '.join(unknown)}", field="verify")

    if cfg.mode is not Mode.WHOLE_LINE:
        try:
            params = cfg.defect.to_params()
        except DefectNLSError as exc:
            raise InvariantViolation(exc.detail, field=f"defect.{exc.field or 'beta'}") from exc
    points = _check_points(cfg)

    if cfg.mode is Mode.DESTRUCTIVE:
        if cfg.center_init is None:
            raise InvariantViolation("destructive mode needs center_init", field="center_init")
        if cfg.solitons:
            raise InvariantViolation("destructive mode takes no solitons", field="solitons")
        if not any(as_init(cfg.center_init)):
            raise InvariantViolation("initialization vector is zero", field="center_init")
    elif cfg.mode is Mode.DEFECT_NSOLITON:
        if not any(as_init(cfg.psi0_init)):
            raise InvariantViolation("initialization vector is zero", field="psi0_init")
        lam0 = lambda0(params)
        for k, point in enumerate(points):
            for target in (lam0, lam0.conjugate()):
                if abs(point.lam - target) < settings.MIN_LAMBDA_GAP:
                    raise InvariantViolation(
                        f"eigenvalue {point.lam} coincides with {target}", field=f"solitons[{k}].lambda"
                    )
