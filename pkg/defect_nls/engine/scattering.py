"""Reflectionless inverse scattering and soliton transmission through the defect.

The reflectionless solver is an independent route to the N-soliton potential:
the norming constants C_j of a dressing chain are computed by the iterated
dressing recursions, fed to the 2N×2N algebraic system, and the potential is
reconstructed from its solution. It shares no code path with the projector
formula of the Darboux engine, which is what makes it an oracle.
"""

import logging
import math

import numpy as np

from defect_nls.config import settings
from defect_nls.engine.darboux import chain_field, locate_peak
from defect_nls.engine.defect import check_not_forbidden
from defect_nls.engine.lax import theta
from defect_nls.engine.numerics import solve_dense
from defect_nls.errors import OverflowRange, PeakNotFound, RealEigenvalue, ZeroComponent
from defect_nls.models.spectral import (
    DefectParams,
    DressingChain,
    PairedSystem,
    ScatteringDatum,
    ShiftPrediction,
    SpectralPoint,
)
from defect_nls.utils import mean_phase, wrap_phase

logger = logging.getLogger(__name__)

# Fresh norming constants use u_j/v_j; True switches to the conjugated ratio v_j*/u_j*.
CONJUGATE_INIT_RATIO = False

# Far-field separation, in units of 1/(velocity gap), used by measure_shift.
SEPARATION_TIME = 15.0


def canonical_point(sp: SpectralPoint) -> SpectralPoint:
    """Reflect a lower half-plane point to (λ*, (−iv*, iu*)); the dressing is unchanged."""
    if sp.lam.imag > 0:
        return sp
    u, v = sp.init
    return SpectralPoint(lam=sp.lam.conjugate(), init=(-1j * v.conjugate(), 1j * u.conjugate()))


def init_to_norming(chain: DressingChain) -> list[ScatteringDatum]:
    """Norming constants of a zero-seed dressing chain.

    Each fold j contributes a fresh constant
    C_j = (λ_j − λ_j*) / (−(u_j/v_j)·a₁₁(λ_j)) with a₁₁ = ∏_{k<j}(λ − λ_k)/(λ − λ_k*),
    and multiplies every earlier C_k by (λ_k − λ_j*)/(λ_k − λ_j).

    Raises:
        ZeroComponent: If some canonical init has a zero component
    """
    points = [canonical_point(p) for p in chain.points]
    lams = [p.lam for p in points]
    constants: list[complex] = []
    for j, point in enumerate(points):
        u, v = point.init
        if u == 0 or v == 0:
            raise ZeroComponent(f"point {j} has init {point.init}; the soliton is invisible")
        ratio = v.conjugate() / u.conjugate() if CONJUGATE_INIT_RATIO else u / v
        lam_j = lams[j]
        a11 = 1 + 0j
        for lam_k in lams[:j]:
            a11 *= (lam_j - lam_k) / (lam_j - lam_k.conjugate())
        for k, lam_k in enumerate(lams[:j]):
            constants[k] *= (lam_k - lam_j.conjugate()) / (lam_k - lam_j)
        constants.append((lam_j - lam_j.conjugate()) / (-ratio * a11))
    return [ScatteringDatum(lam=lam, C=c) for lam, c in zip(lams, constants)]


def solve_reflectionless(data: list[ScatteringDatum], t: float, x: float) -> complex:
    """Potential of reflectionless scattering data at one (t, x).

    Unknowns are the first components of M₁(λ_ℓ*) and M₂(λ_j); with
    c_j = C_j e^{2iθ(λ_j)} and c̄_j = −C_j* e^{−2iθ(λ_j)*} they satisfy
    X_ℓ − Σ_j c_j/(λ_ℓ* − λ_j)·Y_j = 1 and Y_j − Σ_m c̄_m/(λ_j − λ_m*)·X_m = 0,
    and u = 2iΣ_m c̄_m X_m.

    Raises:
        OverflowRange: If some |2 Im θ(λ_j)| exceeds ``IM_THETA_CAP``
        SingularMatrix: For coincident or nearly coincident eigenvalues
    """
    n = len(data)
    if n == 0:
        return 0j
    lams = np.array([d.lam for d in data], dtype=np.complex128)
    norming = np.array([d.C for d in data], dtype=np.complex128)
    th = theta(t, x, lams)
    if np.any(np.abs(2 * th.imag) > settings.IM_THETA_CAP):
        raise OverflowRange(f"reflectionless data overflow at t={t}, x={x}")

    c = norming * np.exp(2j * th)
    c_bar = -np.conj(norming) * np.exp(-2j * np.conj(th))
    kernel = c[None, :] / (np.conj(lams)[:, None] - lams[None, :])
    kernel_bar = c_bar[None, :] / (lams[:, None] - np.conj(lams)[None, :])
    identity = np.eye(n)
    system = np.block([[identity, -kernel], [-kernel_bar, identity]])
    rhs = np.concatenate([np.ones(n), np.zeros(n)]).astype(np.complex128)

    solution = solve_dense(system, rhs)
    return complex(2j * np.sum(c_bar * solution[:n]))


def transmission_quotient(params: DefectParams, lam: complex) -> complex:
    """C̃_j/C_j = (2λ_j + α − s·iβ)/(2λ_j + α + s·iβ).

    Raises:
        ForbiddenEigenvalue: If λ_j is λ₀ or λ₀*
    """
    check_not_forbidden(params, lam)
    shift = params.sign * 1j * params.beta
    return complex((2 * lam + params.alpha - shift) / (2 * lam + params.alpha + shift))


def predict_transmission(params: DefectParams, lambda_j: complex) -> ShiftPrediction:
    """Spatial and phase shift of soliton λ_j across the defect.

    Args:
        params: Defect parameters, branch included
        lambda_j: Eigenvalue in the upper half-plane

    Returns:
        dx = log|q|/(2η_j) and dphi = arg q for the transmission quotient q

    Raises:
        RealEigenvalue: If Im λ_j is not positive
        ForbiddenEigenvalue: If λ_j is λ₀ or λ₀*
    """
    if lambda_j.imag < settings.REAL_AXIS_EPS:
        raise RealEigenvalue(f"eigenvalue {lambda_j} is not in the upper half-plane")
    quotient = transmission_quotient(params, lambda_j)
    return ShiftPrediction(
        dx=math.log(abs(quotient)) / (2 * lambda_j.imag),
        dphi=wrap_phase(math.atan2(quotient.imag, quotient.real)),
    )


def relate_norming(params: DefectParams, d: ScatteringDatum) -> ScatteringDatum:
    """ũ-side norming constant C̃_j = C_j·q with the same eigenvalue."""
    return ScatteringDatum(lam=d.lam, C=d.C * transmission_quotient(params, d.lam))


def _carrier_free_phase(field, point: SpectralPoint, t: float, x: float) -> float:
    xi, eta = point.xi, point.eta
    carrier = np.exp(1j * (2 * xi * x + 4 * (xi**2 - eta**2) * t))
    return float(-np.angle(complex(field(t, x)) * carrier) - np.pi / 2)


def measure_shift(sys: PairedSystem, j: int, t_far: float | None = None) -> ShiftPrediction:
    """Measured transmission shift of soliton j.

    Both chains are evaluated as whole-line fields at t = −t_far and t = +t_far.
    At each time the peak of soliton j is located near its track x = −4ξ_j t
    in either field; the offset and carrier-free phase differences (ũ minus u)
    are averaged over the two times. Interaction shifts from the other
    solitons appear equally in both fields and cancel.

    Args:
        sys: Paired defect system
        j: Index of the soliton in the chain
        t_far: Observation time; defaults to 15 over the smallest velocity gap

    Raises:
        PeakNotFound: If ξ_j = 0 or no peak above η_j is found near the track
    """
    point = canonical_point(sys.right.points[j])
    xi, eta = point.xi, point.eta
    if abs(xi) < 1e-12:
        raise PeakNotFound(f"soliton {j} is stationary and never crosses the defect")
    velocity = -4 * xi
    gaps = [abs(velocity)]
    for k, other in enumerate(sys.right.points):
        if k != j:
            gap = abs(velocity + 4 * canonical_point(other).xi)
            if gap > 0:
                gaps.append(gap)
    min_gap = min(gaps)
    if t_far is None:
        t_far = SEPARATION_TIME / min_gap
    half_window = 0.5 * min_gap * abs(t_far)

    right, left = chain_field(sys.right), chain_field(sys.left)
    offsets, phases = [], []
    for t in (-abs(t_far), abs(t_far)):
        guess = velocity * t
        center_right = locate_peak(right, t, guess, half_window, eta)
        center_left = locate_peak(left, t, guess, half_window, eta)
        offsets.append(center_left - center_right)
        phases.append(
            _carrier_free_phase(left, point, t, center_left) - _carrier_free_phase(right, point, t, center_right)
        )
    shift = ShiftPrediction(dx=float(np.mean(offsets)), dphi=mean_phase(phases))
    logger.info("soliton %d measured shift dx=%.6f dphi=%.6f", j, shift.dx, shift.dphi)
    return shift
