"""Defect Coupling

Joins the u-side (x ≥ 0) and ũ-side (x ≤ 0) dressings through the localized
defect matrix:
- G₀ = 2λI + diag(α ± iβ, α ∓ iβ) for the zero seeds
- Spectral pairing of the ũ-side initialization vectors, init ↦ G₀(λ_j)·init/2
- G_N = D̃[N]·(G₀/2)·(D[N])⁻¹ at x = 0 and the defect data read back from it
- Defect-condition residuals and the matrix identities G_N must satisfy
- The destructive (boundary-bound) solution dressed at λ₀

The defect sits at x = 0 throughout.
"""

import logging

import numpy as np

from defect_nls.config import settings
from defect_nls.engine.darboux import build_chain_state, chain_field, eval_DN, extrapolated_derivatives
from defect_nls.engine.lax import lax_V, seed_vector
from defect_nls.engine.numerics import IDENTITY, Mat2C, mat_det, mat_inv, mat_vec, orthogonal_companion
from defect_nls.errors import (
    ComplexOmega,
    ForbiddenEigenvalue,
    SingularDressing,
    SingularMatrix,
    UnsupportedSeed,
)
from defect_nls.models.spectral import (
    Branch,
    CoupledSystem,
    DefectFormReadout,
    DefectParams,
    DestructiveSystem,
    DressingChain,
    PairedSystem,
    PotentialSample,
    Side,
    SpectralPoint,
)

logger = logging.getLogger(__name__)

DEFECT_X = 0.0


def lambda0(params: DefectParams) -> complex:
    """λ₀ = −(α + s·iβ)/2 with s the branch sign."""
    return complex(-(params.alpha + params.sign * 1j * params.beta) / 2)


def b_infinity(params: DefectParams, lam) -> Mat2C:
    """B_∞(λ) = (2λ + α)I + s·iβσ₃; broadcasts over array λ."""
    lam = np.asarray(lam, dtype=np.complex128)
    shift = params.sign * 1j * params.beta
    out = np.zeros((*lam.shape, 2, 2), dtype=np.complex128)
    out[..., 0, 0] = 2 * lam + params.alpha + shift
    out[..., 1, 1] = 2 * lam + params.alpha - shift
    return out


def g0_eval(params: DefectParams, u0: complex, ut0: complex, lam) -> Mat2C:
    """Localized defect matrix G₀ of the seed pair (u0, ũ0) at x = 0.

    Raises:
        UnsupportedSeed: If either seed value is nonzero
    """
    if u0 != 0 or ut0 != 0:
        raise UnsupportedSeed("only the zero seed pair is supported")
    return b_infinity(params, lam)


def check_not_forbidden(params: DefectParams, lam: complex) -> None:
    lam0 = lambda0(params)
    for target in (lam0, lam0.conjugate()):
        if abs(lam - target) < settings.MIN_LAMBDA_GAP:
            raise ForbiddenEigenvalue(f"eigenvalue {lam} coincides with {target}")


def pair_init_vectors(params: DefectParams, sp: SpectralPoint) -> SpectralPoint:
    """ũ-side partner of a u-side spectral point: same λ_j, init G₀(λ_j)·init/2.

    Raises:
        ForbiddenEigenvalue: If λ_j is λ₀ or λ₀*
    """
    check_not_forbidden(params, sp.lam)
    paired = mat_vec(b_infinity(params, sp.lam), sp.init_vector) / 2
    return SpectralPoint(lam=sp.lam, init=(complex(paired[0]), complex(paired[1])))


def build_paired_system(
    params: DefectParams,
    points,
    psi0_init=(1 + 0j, 0j),
    paired: bool = True,
) -> PairedSystem:
    """Assemble the two chains, λ₀ and ψ₀ for a defect N-soliton.

    Args:
        params: Defect parameters
        points: u-side spectral points, in dressing order
        psi0_init: Initialization vector of the extra solution at λ₀
        paired: When False the ũ-side reuses the u-side inits unchanged
            (the mismatched negative control)

    Returns:
        Validated PairedSystem

    Raises:
        DuplicateEigenvalue: Two points share λ
        ForbiddenEigenvalue: Some λ_j is λ₀ or λ₀*
        ZeroVector: ``psi0_init`` is zero
    """
    lam0 = lambda0(params)
    right = DressingChain(points=tuple(points), side=Side.RIGHT)
    if paired:
        left_points = tuple(pair_init_vectors(params, p) for p in right.points)
    else:
        left_points = right.points
    left = DressingChain(points=left_points, side=Side.LEFT)
    psi0 = SpectralPoint(lam=lam0, init=tuple(psi0_init))
    return PairedSystem(defect=params, right=right, left=left, lambda0=lam0, psi0=psi0)


def destructive_solution(
    params: DefectParams,
    center_init=(1 + 0j, 1 + 0j),
    side: Side = Side.LEFT,
) -> DestructiveSystem:
    """A soliton dressed at λ₀ on one half-line, zero field on the other.

    The soliton has amplitude |β| and velocity 2α. With the ũ-side dressed, G₁
    is the one-fold dressing matrix D̃[1] itself. With the u-side dressed, G₁ is
    (D[1])⁻¹ scaled by det D[1] = (λ − λ₀)(λ − λ₀*), i.e. the adjugate of D[1].

    Args:
        params: Defect parameters
        center_init: Initialization vector of the seed solution at λ₀
        side: Half-line carrying the soliton

    Raises:
        ZeroVector: If ``center_init`` is zero
    """
    lam0 = lambda0(params)
    dressed = (SpectralPoint(lam=lam0, init=tuple(center_init)),)
    right, left = ((), dressed) if side is Side.LEFT else (dressed, ())
    return DestructiveSystem(
        defect=params,
        right=DressingChain(points=right, side=Side.RIGHT),
        left=DressingChain(points=left, side=Side.LEFT),
        lambda0=lam0,
    )


def side_fields(sys: CoupledSystem):
    """(u, ũ) field functions of the two chains, each defined on the whole line."""
    return chain_field(sys.right), chain_field(sys.left)


def gn_eval(sys: CoupledSystem, t: float, lam: complex) -> Mat2C:
    """Localized defect matrix G_N(t, λ) at x = 0.

    For a paired system this is D̃[N]·(G₀/2)·(D[N])⁻¹. For the destructive
    system it is the ũ-side dressing D̃[1], or the adjugate of D[1] when the
    u-side carries the soliton.

    Raises:
        SingularDressing: If λ is (numerically) some λ_j or λ_j*
    """
    if isinstance(sys, DestructiveSystem):
        dressing = _dressing_at_defect(sys.dressed, t, lam)
        if sys.dressed_side is Side.LEFT:
            return dressing
        return _adjugate(dressing)

    for point in sys.right.points:
        if min(abs(lam - point.lam), abs(lam - np.conj(point.lam))) < settings.MIN_LAMBDA_GAP:
            raise SingularDressing(f"D[N] is singular at λ={lam}")
    dressing = eval_DN(build_chain_state(sys.right, t, DEFECT_X), sys.right, lam)
    dressing_tilde = eval_DN(build_chain_state(sys.left, t, DEFECT_X), sys.left, lam)
    try:
        inverse = mat_inv(dressing)
    except SingularMatrix as exc:
        raise SingularDressing(f"D[N] is singular at λ={lam}") from exc
    return dressing_tilde @ (b_infinity(sys.defect, lam) / 2) @ inverse


def omega(params: DefectParams, u: complex, ut: complex) -> float:
    """Ω = √(β² − |ũ − u|²).

    Raises:
        ComplexOmega: If β² − |ũ − u|² < −OMEGA_SLACK
    """
    radicand = params.beta**2 - abs(ut - u) ** 2
    if radicand < -settings.OMEGA_SLACK:
        raise ComplexOmega(f"β² − |ũ − u|² = {radicand:.3e} is negative")
    return float(np.sqrt(max(radicand, 0.0)))


def gn_form_readout(sys: CoupledSystem, t: float) -> DefectFormReadout:
    """Read α, β², the realised branch and the jump ũ − u off G_N(t, ·).

    G_N = λI + c, probed at λ = 0 for c and at λ = ±1 to check the linear
    form. tr c gives α, 4·det c − α² gives β², and the sign of
    Im(c₁₁ − c₂₂) is the sign in front of Ω in the defect conditions.
    """
    c = gn_eval(sys, t, 0j)
    plus_one = gn_eval(sys, t, 1 + 0j)
    minus_one = gn_eval(sys, t, -1 + 0j)
    linearity = max(np.abs(plus_one - c - IDENTITY).max(), np.abs(minus_one - c + IDENTITY).max())

    alpha_hat = float(np.real(c[0, 0] + c[1, 1]))
    beta_sq_hat = float(np.real(4 * mat_det(c))) - alpha_hat**2
    kappa = float(np.imag(c[0, 0] - c[1, 1]))
    defect_sign = 1 if kappa >= 0 else -1
    beta_sign = 1 if sys.defect.beta > 0 else -1
    return DefectFormReadout(
        alpha_hat=alpha_hat,
        beta_sq_hat=max(beta_sq_hat, 0.0),
        branch_hat=Branch.PLUS if defect_sign == beta_sign else Branch.MINUS,
        offdiag_jump=complex(2j * c[0, 1]),
        defect_sign=defect_sign,
        linearity_error=float(linearity),
    )


def defect_residual(sys: CoupledSystem, t: float) -> tuple[float, float]:
    """Residuals of both defect conditions at x = 0.

    With d = ũ − u and s the sign realised by G_N:
    r1 = |d_x − iαd − sΩ(ũ + u)| and
    r2 = |d_t + αd_x − isΩ(ũ + u)_x − id(|u|² + |ũ|²)|.

    Raises:
        ComplexOmega: If the pair leaves the admissible class
    """
    if sys.right.n == 0 and sys.left.n == 0:
        return 0.0, 0.0
    right, left = side_fields(sys)
    u, ut = complex(right(t, DEFECT_X)), complex(left(t, DEFECT_X))
    u_t, u_x, _ = extrapolated_derivatives(right, t, DEFECT_X)
    ut_t, ut_x, _ = extrapolated_derivatives(left, t, DEFECT_X)

    alpha = sys.defect.alpha
    sign = gn_form_readout(sys, t).defect_sign
    big_omega = omega(sys.defect, u, ut)
    jump, jump_x, jump_t = ut - u, ut_x - u_x, ut_t - u_t
    r1 = abs(jump_x - 1j * alpha * jump - sign * big_omega * (ut + u))
    r2 = abs(
        jump_t
        + alpha * jump_x
        - 1j * sign * big_omega * (ut_x + u_x)
        - 1j * jump * (abs(u) ** 2 + abs(ut) ** 2)
    )
    return float(r1), float(r2)


def _dressing_at_defect(chain: DressingChain, t: float, lam: complex) -> Mat2C:
    return eval_DN(build_chain_state(chain, t, DEFECT_X), chain, lam)


def _adjugate(m: Mat2C) -> Mat2C:
    """det(m)·m⁻¹, defined also where m is singular."""
    out = np.empty_like(m)
    out[..., 0, 0], out[..., 1, 1] = m[..., 1, 1], m[..., 0, 0]
    out[..., 0, 1], out[..., 1, 0] = -m[..., 0, 1], -m[..., 1, 0]
    return out


def permutability_residual(sys: PairedSystem, t: float, lam: complex) -> float:
    """max |D̃[N](λ)·(G₀(λ)/2) − G_N(λ)·D[N](λ)| at x = 0."""
    lhs = _dressing_at_defect(sys.left, t, lam) @ (b_infinity(sys.defect, lam) / 2)
    rhs = gn_eval(sys, t, lam) @ _dressing_at_defect(sys.right, t, lam)
    return float(np.abs(lhs - rhs).max())


def det_invariance_residual(sys: CoupledSystem, t: float, lam: complex) -> float:
    """|det G_N(λ) − (λ² + αλ + (α² + β²)/4)|."""
    alpha, beta = sys.defect.alpha, sys.defect.beta
    expected = lam**2 + alpha * lam + (alpha**2 + beta**2) / 4
    return float(abs(mat_det(gn_eval(sys, t, lam)) - expected))


def kernel_transport_residual(sys: CoupledSystem, t: float) -> float:
    """‖G_N(λ₀)ω₀‖/‖ω₀‖ with ω₀ the transported kernel vector at x = 0.

    For a paired system ω₀ = D[N](λ₀)ψ₀. For the destructive system it is the
    seed vector of the dressing at λ₀, or its orthogonal companion when the
    u-side is dressed.
    """
    if isinstance(sys, DestructiveSystem):
        kernel = seed_vector(sys.dressed.points[0], t, DEFECT_X)
        if sys.dressed_side is Side.RIGHT:
            kernel = orthogonal_companion(kernel)
    else:
        psi0 = seed_vector(sys.psi0, t, DEFECT_X)
        kernel = mat_vec(_dressing_at_defect(sys.right, t, sys.lambda0), psi0)
    image = mat_vec(gn_eval(sys, t, sys.lambda0), kernel)
    return float(np.linalg.norm(image) / np.linalg.norm(kernel))


def _potential_sample(field, t: float) -> PotentialSample:
    _, u_x, _ = extrapolated_derivatives(field, t, DEFECT_X)
    return PotentialSample(u=complex(field(t, DEFECT_X)), u_x=u_x)


def _gn_time_derivative(sys: CoupledSystem, t: float, lam: complex, h: float) -> Mat2C:
    samples = [gn_eval(sys, t + k * h, lam) for k in (-2, -1, 1, 2)]
    return (samples[0] - 8 * samples[1] + 8 * samples[2] - samples[3]) / (12 * h)


def boundary_constraint_residual(sys: CoupledSystem, t: float, lam: complex, h: float | None = None) -> float:
    """max |∂ₜG_N − Ṽ[N]G_N + G_N V[N]| at x = 0.

    ∂ₜ is the Richardson-extrapolated fourth-order difference at steps h and h/2.
    """
    h = settings.FD_STEP if h is None else h
    g_t = (16 * _gn_time_derivative(sys, t, lam, h / 2) - _gn_time_derivative(sys, t, lam, h)) / 15
    g = gn_eval(sys, t, lam)
    right, left = side_fields(sys)
    v_right = lax_V(lam, _potential_sample(right, t))
    v_left = lax_V(lam, _potential_sample(left, t))
    return float(np.abs(g_t - v_left @ g + g @ v_right).max())
