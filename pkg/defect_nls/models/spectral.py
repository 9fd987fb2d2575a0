"""Domain Value Types

Frozen pydantic models for the quantities the engine passes around:
- Spectral points (an eigenvalue plus its initialization vector)
- Dressing chains and the per-(t, x) state built from them
- Defect parameters and the coupled two-sided systems
- Scattering data and transmission shifts

Invariant violations raise the package's own exceptions (not ``ValueError``),
so they escape pydantic validation unchanged.
"""

import math
from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from defect_nls.config import settings
from defect_nls.errors import (
    DuplicateEigenvalue,
    ForbiddenEigenvalue,
    InvariantViolation,
    NonFiniteValue,
    RealEigenvalue,
    ZeroComponent,
    ZeroVector,
)


class Side(str, Enum):
    """Half-line a dressing chain belongs to.

    Values:
        RIGHT: u-side, x ≥ 0
        LEFT: ũ-side, x ≤ 0
    """

    RIGHT = "right"
    LEFT = "left"


class Branch(str, Enum):
    """Sign choice in the (1,1) entry of the defect matrix.

    Values:
        PLUS: G₀ = 2λI + diag(α + iβ, α − iβ)
        MINUS: G₀ = 2λI + diag(α − iβ, α + iβ)
    """

    PLUS = "plus"
    MINUS = "minus"

    @property
    def sign(self) -> int:
        return 1 if self is Branch.PLUS else -1


def _require_finite(*values: complex) -> None:
    for value in values:
        if not (math.isfinite(value.real) and math.isfinite(value.imag)):
            raise NonFiniteValue(f"non-finite value {value!r}")


class SpectralPoint(BaseModel):
    """One soliton's spectral identity.

    Attributes:
        lam: Non-real eigenvalue λ = ξ + iη
        init: Constant amplitudes (u, v) of the zero-seed vector solution
    """

    model_config = ConfigDict(frozen=True)

    lam: complex
    init: tuple[complex, complex] = (1 + 0j, 1 + 0j)

    @model_validator(mode="after")
    def _check_invariants(self) -> "SpectralPoint":
        _require_finite(self.lam, *self.init)
        if abs(self.lam.imag) < settings.REAL_AXIS_EPS:
            raise RealEigenvalue(f"eigenvalue {self.lam} is on the real axis")
        if self.init[0] == 0 and self.init[1] == 0:
            raise ZeroVector("initialization vector is zero")
        return self

    @property
    def xi(self) -> float:
        return self.lam.real

    @property
    def eta(self) -> float:
        return self.lam.imag

    @property
    def init_vector(self) -> np.ndarray:
        return np.array(self.init, dtype=np.complex128)


class PotentialSample(BaseModel):
    """Field value and its x-derivative at one point."""

    model_config = ConfigDict(frozen=True)

    u: complex = 0j
    u_x: complex = 0j


class DressingChain(BaseModel):
    """Ordered spectral points dressed one after the other on one side.

    Attributes:
        points: λ_1 … λ_N with their initialization vectors, pairwise distinct
        side: Half-line the chain describes
    """

    model_config = ConfigDict(frozen=True)

    points: tuple[SpectralPoint, ...] = ()
    side: Side = Side.RIGHT

    @model_validator(mode="after")
    def _check_distinct(self) -> "DressingChain":
        lams = [p.lam for p in self.points]
        for j, lam_j in enumerate(lams):
            for k in range(j):
                if abs(lam_j - lams[k]) < settings.MIN_LAMBDA_GAP:
                    raise DuplicateEigenvalue(
                        f"points {k} and {j} share eigenvalue {lam_j}"
                    )
        return self

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def lams(self) -> np.ndarray:
        return np.array([p.lam for p in self.points], dtype=np.complex128)


class ChainState(BaseModel):
    """Dressed kernel vectors and projectors of a chain at given (t, x).

    ``t`` and ``x`` may be arrays; ``dressed_vectors`` then has shape
    ``(N, *grid, 2)`` and ``projectors`` ``(N, *grid, 2, 2)``.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    t: np.ndarray
    x: np.ndarray
    dressed_vectors: np.ndarray
    projectors: np.ndarray

    @property
    def n(self) -> int:
        return self.projectors.shape[0]

    @property
    def grid_shape(self) -> tuple[int, ...]:
        return tuple(self.projectors.shape[1:-2])


class ScatteringDatum(BaseModel):
    """Discrete eigenvalue with its norming constant C = 2η e^{2ηx_j + iφ_j}."""

    model_config = ConfigDict(frozen=True)

    lam: complex
    C: complex

    @model_validator(mode="after")
    def _check_invariants(self) -> "ScatteringDatum":
        _require_finite(self.lam, self.C)
        if self.lam.imag < settings.REAL_AXIS_EPS:
            raise RealEigenvalue(f"scattering eigenvalue {self.lam} is not in the upper half-plane")
        if self.C == 0:
            raise ZeroComponent("norming constant is zero")
        return self

    @classmethod
    def from_position(cls, lam: complex, x_j: float, phi_j: float) -> "ScatteringDatum":
        eta = lam.imag
        return cls(lam=lam, C=2 * eta * np.exp(2 * eta * x_j + 1j * phi_j))

    @property
    def eta(self) -> float:
        return self.lam.imag

    @property
    def x_j(self) -> float:
        return math.log(abs(self.C) / (2 * self.eta)) / (2 * self.eta)

    @property
    def phi_j(self) -> float:
        return math.atan2(self.C.imag, self.C.real)


class OneSolitonParams(BaseModel):
    """Velocity, amplitude, centre and phase of a single soliton."""

    model_config = ConfigDict(frozen=True)

    xi: float
    eta: float = Field(gt=0)
    x1: float = 0.0
    phi1: float = 0.0

    @classmethod
    def from_datum(cls, datum: ScatteringDatum) -> "OneSolitonParams":
        return cls(xi=datum.lam.real, eta=datum.eta, x1=datum.x_j, phi1=datum.phi_j)


class ShiftPrediction(BaseModel):
    """Spatial and phase shift a soliton picks up crossing the defect.

    Attributes:
        dx: x̃_j − x_j
        dphi: φ̃_j − φ_j, principal value in (-π, π]
    """

    model_config = ConfigDict(frozen=True)

    dx: float
    dphi: float


class DefectParams(BaseModel):
    """Defect parameters α, β (β ≠ 0) and the branch of the (1,1) entry."""

    model_config = ConfigDict(frozen=True)

    alpha: float = 0.0
    beta: float = 1.0
    branch: Branch = Branch.PLUS

    @model_validator(mode="after")
    def _check_beta(self) -> "DefectParams":
        _require_finite(complex(self.alpha, self.beta))
        if abs(self.beta) < settings.MIN_BETA:
            raise InvariantViolation("beta must be nonzero", field="beta")
        return self

    @property
    def sign(self) -> int:
        return self.branch.sign

    def with_branch(self, branch: Branch) -> "DefectParams":
        return DefectParams(alpha=self.alpha, beta=self.beta, branch=branch)


class CoupledSystem(BaseModel):
    """Two dressing chains joined at x = 0 by a defect."""

    model_config = ConfigDict(frozen=True)

    defect: DefectParams
    right: DressingChain
    left: DressingChain
    lambda0: complex

    def _check_forbidden(self, points: tuple[SpectralPoint, ...]) -> None:
        for k, point in enumerate(points):
            for target in (self.lambda0, self.lambda0.conjugate()):
                if abs(point.lam - target) < settings.MIN_LAMBDA_GAP:
                    raise ForbiddenEigenvalue(
                        f"eigenvalue {point.lam} of point {k} coincides with {target}"
                    )


class PairedSystem(CoupledSystem):
    """u-side and ũ-side chains sharing eigenvalues, plus the extra solution ψ₀ at λ₀."""

    psi0: SpectralPoint

    @model_validator(mode="after")
    def _check_pairing(self) -> "PairedSystem":
        if not np.array_equal(self.right.lams, self.left.lams):
            raise InvariantViolation("left and right chains must share eigenvalues", field="left")
        if self.psi0.lam != self.lambda0:
            raise InvariantViolation("psi0 must sit at lambda0", field="psi0")
        self._check_forbidden(self.right.points)
        return self


class DestructiveSystem(CoupledSystem):
    """A single soliton dressed at λ₀ on one half-line, zero field on the other.

    Usually the ũ-side is dressed; the mirrored system dresses the u-side.
    """

    @model_validator(mode="after")
    def _check_shape(self) -> "DestructiveSystem":
        if sorted((self.right.n, self.left.n)) != [0, 1]:
            raise InvariantViolation("destructive system dresses exactly one side once", field="left")
        if self.dressed.points[0].lam != self.lambda0:
            raise InvariantViolation("destructive dressing must sit at lambda0", field=self.dressed_side.value)
        return self

    @property
    def dressed_side(self) -> Side:
        return Side.LEFT if self.left.n else Side.RIGHT

    @property
    def dressed(self) -> DressingChain:
        return self.left if self.left.n else self.right

    @property
    def center_init(self) -> tuple[complex, complex]:
        return self.dressed.points[0].init


class DefectFormReadout(BaseModel):
    """Defect data read back from G_N at x = 0.

    Attributes:
        alpha_hat: Recovered α
        beta_sq_hat: Recovered β², clipped at 0
        branch_hat: Branch realised by G_N
        offdiag_jump: ũ − u at x = 0
        defect_sign: Sign in front of Ω in the defect conditions
        linearity_error: Deviation of G_N from a unit-leading degree-1 polynomial
    """

    model_config = ConfigDict(frozen=True)

    alpha_hat: float
    beta_sq_hat: float
    branch_hat: Branch
    offdiag_jump: complex
    defect_sign: int
    linearity_error: Optional[float] = None
