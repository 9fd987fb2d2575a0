"""Run Configuration and Output Schemas

Pydantic models for everything that crosses the file boundary:
- Enums for run modes, check statuses and row flags
- The JSON run configuration (defect, solitons, grid, verification, output)
- Verification report records
- The field table produced by grid evaluation

Complex numbers appear in JSON as ``[re, im]`` pairs and initialization
vectors as two such pairs. These schemas check shape and types only; domain
invariants (β ≠ 0, non-real λ, distinct eigenvalues, grid limits) are checked
by the loader so it can point at the offending field.
"""

from enum import Enum
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, RootModel, model_validator

from defect_nls.models.spectral import Branch, DefectParams, Side, SpectralPoint

ComplexPair = tuple[float, float]
InitPair = tuple[ComplexPair, ComplexPair]
Axis = tuple[float, float, int]

# Report order
CHECK_NAMES = (
    "projector_laws",
    "determinant_factorization",
    "dressing_symmetry",
    "kernel_transport",
    "permutability",
    "det_invariance",
    "defect_residual",
    "omega_admissibility",
    "boundary_constraint",
    "nls_residual",
    "oracle_equivalence",
    "closed_form_triangle",
    "shift_measurement",
    "branch_consistency",
)


def as_complex(pair: ComplexPair) -> complex:
    return complex(pair[0], pair[1])


def as_init(pair: InitPair) -> tuple[complex, complex]:
    return as_complex(pair[0]), as_complex(pair[1])


class Mode(str, Enum):
    """What a run constructs.

    Values:
        DEFECT_NSOLITON: Paired N-soliton across the defect
        DESTRUCTIVE: Zero field on x ≥ 0, boundary-bound soliton on x ≤ 0
        WHOLE_LINE: Plain N-soliton on the whole line, no defect
    """

    DEFECT_NSOLITON = "defect-nsoliton"
    DESTRUCTIVE = "destructive"
    WHOLE_LINE = "whole-line"


class CheckStatus(str, Enum):
    """Outcome of one verification check.

    Values:
        PASS: Measured value within tolerance
        FAIL: Measured value above tolerance, or the check raised
        SKIPPED: Disabled, or not applicable to the run mode
    """

    PASS = "pass"
    FAIL = "fail"
    SKIPPED = "skipped"


class RowFlag(str, Enum):
    """Per-row flag of the exported field table.

    Values:
        OK: Finite value
        OVERFLOW: Evaluation exceeded the exponential range; numbers are nan
    """

    OK = "ok"
    OVERFLOW = "overflow"


class SolitonSpec(BaseModel):
    """One soliton of a run configuration.

    Attributes:
        lam: Eigenvalue as ``[re, im]``, given as ``lambda`` in JSON
        init: Initialization vector as ``[[re, im], [re, im]]``
    """

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    lam: ComplexPair = Field(alias="lambda")
    init: InitPair = ((1.0, 0.0), (1.0, 0.0))

    def to_point(self) -> SpectralPoint:
        return SpectralPoint(lam=as_complex(self.lam), init=as_init(self.init))


class DefectSpec(BaseModel):
    """Defect block of a run configuration."""

    model_config = ConfigDict(extra="forbid")

    alpha: float = 0.0
    beta: float = 1.0
    branch: Branch = Branch.PLUS

    def to_params(self) -> DefectParams:
        return DefectParams(alpha=self.alpha, beta=self.beta, branch=self.branch)


class GridSpec(BaseModel):
    """Evaluation grid, each axis given as ``[min, max, n]``."""

    model_config = ConfigDict(extra="forbid")

    t: Axis
    x: Axis

    @property
    def nt(self) -> int:
        return self.t[2]

    @property
    def nx(self) -> int:
        return self.x[2]

    @staticmethod
    def _axis(spec: Axis) -> np.ndarray:
        lo, hi, n = spec
        values = np.linspace(lo, hi, n)
        values[np.abs(values) <= 1e-12 * (hi - lo)] = 0.0
        return values

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        """The t and x node values; a node within 1e-12·span of zero is exactly 0."""
        return self._axis(self.t), self._axis(self.x)


class VerifySpec(BaseModel):
    """Verification toggles.

    ``true``/``false`` in JSON enable or disable everything with defaults.

    Attributes:
        enabled: Run any checks at all
        checks: Names of the checks to run; all of them when omitted
        tolerances: Per-check tolerance overrides
        mismatched_pairing: Build the ũ-side without spectral pairing
            (negative control; the defect residual check should fail)
        seed: Seed for the random sample points
    """

    model_config = ConfigDict(extra="forbid")

    enabled: bool = True
    checks: Optional[list[str]] = None
    tolerances: dict[str, float] = Field(default_factory=dict)
    mismatched_pairing: bool = False
    seed: int = 7

    @model_validator(mode="before")
    @classmethod
    def _from_bool(cls, data):
        if isinstance(data, bool):
            return {"enabled": data}
        return data

    def wants(self, check: str) -> bool:
        return self.enabled and (self.checks is None or check in self.checks)


class OutputSpec(BaseModel):
    """Default output locations; command-line flags take precedence."""

    model_config = ConfigDict(extra="forbid")

    csv: Optional[str] = None
    report: Optional[str] = None


class RunConfig(BaseModel):
    """Complete run configuration as read from JSON.

    Attributes:
        mode: What to construct
        defect: Defect parameters (ignored in whole-line mode)
        solitons: Spectral data, in dressing order
        center_init: Initialization vector at λ₀, destructive mode only
        destructive_side: Half-line carrying the destructive soliton
        psi0_init: Initialization vector of the extra solution ψ₀
        grid: Evaluation grid
        verify: Verification toggles and tolerances
        output: Default output paths
        seed_note: Seed solution tag, always ``"zero"``
        description: Free text, e.g. how a figure configuration was chosen
    """

    model_config = ConfigDict(extra="forbid")

    mode: Mode = Mode.DEFECT_NSOLITON
    defect: DefectSpec = Field(default_factory=DefectSpec)
    solitons: list[SolitonSpec] = Field(default_factory=list)
    center_init: Optional[InitPair] = None
    destructive_side: Side = Side.LEFT
    psi0_init: InitPair = ((1.0, 0.0), (0.0, 0.0))
    grid: GridSpec
    verify: VerifySpec = Field(default_factory=VerifySpec)
    output: OutputSpec = Field(default_factory=OutputSpec)
    seed_note: Literal["zero"] = "zero"
    description: Optional[str] = None

    def points(self) -> list[SpectralPoint]:
        return [s.to_point() for s in self.solitons]


class CheckRecord(BaseModel):
    """One line of the verification report."""

    check: str
    status: CheckStatus
    measured: Optional[float] = None
    tolerance: Optional[float] = None
    seconds: float = 0.0


class Report(RootModel[list[CheckRecord]]):
    """Verification report, serialized as a JSON array of check records."""

    @property
    def failed(self) -> list[CheckRecord]:
        return [r for r in self.root if r.status is CheckStatus.FAIL]

    @property
    def passed(self) -> bool:
        return not self.failed

    def get(self, check: str) -> CheckRecord:
        return next(r for r in self.root if r.check == check)


class FieldTable(BaseModel):
    """Rows of an evaluated grid as parallel columns.

    Attributes:
        t: Time of each row
        x: Position of each row
        side: ``"L"`` or ``"R"`` per row
        u: Complex field value (nan on overflow)
        flag: RowFlag value per row
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    t: np.ndarray
    x: np.ndarray
    side: np.ndarray
    u: np.ndarray
    flag: np.ndarray

    def __len__(self) -> int:
        return len(self.t)
