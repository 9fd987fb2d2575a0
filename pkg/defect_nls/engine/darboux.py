"""N-fold Darboux dressing of the zero seed.

Each fold is D[1](λ) = (λ − λ₁*)I + (λ₁* − λ₁)P with P the projector onto the
dressed kernel vector. Folds are applied in the listed order of the chain, so
D[N] = F_N ⋯ F_1, and the new potential is read off from
Q[N] = Q[0] − iΣ(λ_j − λ_j*)[σ₃, P[j]].

All evaluations broadcast over array-valued (t, x).
"""

import logging
from typing import Callable

import numpy as np

from defect_nls.config import settings
from defect_nls.engine.lax import SIGMA, seed_vector
from defect_nls.engine.numerics import IDENTITY, Mat2C, Vec2C, mat_det, mat_vec
from defect_nls.errors import (
    DegenerateDressing,
    PeakNotFound,
    RealEigenvalue,
    ZeroVector,
)
from defect_nls.models.spectral import ChainState, DressingChain, OneSolitonParams

logger = logging.getLogger(__name__)

Field = Callable[..., complex | np.ndarray]

_TINY_NORM = 1e-300


def _scalar_or_array(values: np.ndarray):
    return complex(values) if np.ndim(values) == 0 else values


def projector(v: Vec2C) -> Mat2C:
    """Rank-one Hermitian projector ψψ†/(ψ†ψ).

    Raises:
        ZeroVector: If v vanishes (at any broadcast position)
    """
    v = np.asarray(v, dtype=np.complex128)
    size = np.max(np.abs(v), axis=-1)
    if np.any(size == 0):
        raise ZeroVector("cannot project onto the zero vector")
    w = v / size[..., None]
    norm2 = np.sum(np.abs(w) ** 2, axis=-1)
    return w[..., :, None] * np.conj(w)[..., None, :] / norm2[..., None, None]


def _fold(lam1: complex, proj: Mat2C, lam) -> Mat2C:
    lam = np.asarray(lam, dtype=np.complex128)[..., None, None]
    lam1_bar = np.conj(lam1)
    return (lam - lam1_bar) * IDENTITY + (lam1_bar - lam1) * proj


def one_fold(lam1: complex, v: Vec2C, lam) -> Mat2C:
    """Single dressing factor (λ − λ₁*)I + (λ₁* − λ₁)P(v)."""
    if abs(np.imag(lam1)) < settings.REAL_AXIS_EPS:
        raise RealEigenvalue(f"dressing eigenvalue {lam1} is on the real axis")
    return _fold(lam1, projector(v), lam)


def build_chain_state(chain: DressingChain, t, x) -> ChainState:
    """Dressed kernel vectors ψ_j[j−1] = D[j−1](λ_j)ψ_j and their projectors.

    Args:
        chain: Spectral points to dress with, in order
        t: Time, scalar or array
        x: Position, scalar or array broadcastable with ``t``

    Returns:
        ChainState for the broadcast grid of (t, x)

    Raises:
        DegenerateDressing: If a dressed vector has norm below 1e-300
        OverflowRange: Propagated from the seed vectors
    """
    t_arr, x_arr = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
    shape = t_arr.shape
    vectors = np.empty((chain.n, *shape, 2), dtype=np.complex128)
    projectors = np.empty((chain.n, *shape, 2, 2), dtype=np.complex128)

    for j, point in enumerate(chain.points):
        psi = seed_vector(point, t_arr, x_arr)
        for k in range(j):
            lam_k = chain.points[k].lam
            psi = (point.lam - np.conj(lam_k)) * psi + (np.conj(lam_k) - lam_k) * mat_vec(projectors[k], psi)
        if np.any(np.max(np.abs(psi), axis=-1) < _TINY_NORM):
            raise DegenerateDressing(f"dressed vector {j} vanished; coincident spectral data?")
        vectors[j] = psi
        projectors[j] = projector(psi)

    return ChainState(t=np.array(t_arr), x=np.array(x_arr), dressed_vectors=vectors, projectors=projectors)


def eval_DN(state: ChainState, chain: DressingChain, lam) -> Mat2C:
    """D[N](λ) = F_N ⋯ F_1 at the state's (t, x)."""
    dressing = np.broadcast_to(IDENTITY, (*state.grid_shape, 2, 2)).copy()
    for j, point in enumerate(chain.points):
        dressing = _fold(point.lam, state.projectors[j], lam) @ dressing
    return dressing


def reconstruct_u(state: ChainState, chain: DressingChain, seed_u: complex = 0j):
    """Entry (1,2) of Q[N] = Q[0] − iΣ(λ_j − λ_j*)[σ₃, P[j]].

    Raises:
        DegenerateDressing: If the reconstructed Q[N] loses its
            [[0, u], [−u*, 0]] structure
    """
    upper = np.full(state.grid_shape, seed_u, dtype=np.complex128)
    lower = np.full(state.grid_shape, -np.conj(seed_u), dtype=np.complex128)
    for j, point in enumerate(chain.points):
        weight = -1j * (point.lam - np.conj(point.lam))
        upper += 2 * weight * state.projectors[j][..., 0, 1]
        lower -= 2 * weight * state.projectors[j][..., 1, 0]
    mismatch = np.max(np.abs(lower + np.conj(upper)), initial=0.0)
    if mismatch > 1e-9 * (1 + np.max(np.abs(upper), initial=0.0)):
        raise DegenerateDressing(f"reconstructed potential is not skew-Hermitian (gap {mismatch:.2e})")
    return _scalar_or_array(upper)


def chain_field(chain: DressingChain) -> Field:
    """Field function (t, x) ↦ u[N](t, x) of a chain; broadcasts over arrays."""

    def field(t, x):
        return reconstruct_u(build_chain_state(chain, t, x), chain)

    return field


def one_soliton_closed(p: OneSolitonParams, t, x):
    """u = 2η e^{−i(2ξx + 4(ξ² − η²)t + φ₁ + π/2)} sech(2η(x + 4ξt − x₁))."""
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    phase = 2 * p.xi * x + 4 * (p.xi**2 - p.eta**2) * t + p.phi1 + np.pi / 2
    with np.errstate(over="ignore"):
        envelope = 1.0 / np.cosh(2 * p.eta * (x + 4 * p.xi * t - p.x1))
    return _scalar_or_array(2 * p.eta * np.exp(-1j * phase) * envelope)


# Field diagnostics

_OFFSETS = np.array([-2.0, -1.0, 0.0, 1.0, 2.0])


def _stencil(field: Field, t: float, x: float, h: float, axis: str) -> np.ndarray:
    if axis == "x":
        values = field(t, x + h * _OFFSETS)
    else:
        values = field(t + h * _OFFSETS, x)
    return np.broadcast_to(np.asarray(values, dtype=np.complex128), _OFFSETS.shape)


def numeric_derivatives(field: Field, t: float, x: float, h: float | None = None):
    """Fourth-order central differences (u_t, u_x, u_xx) of a field.

    The field must accept array-valued ``t`` or ``x`` (every field built by
    this package does).

    Args:
        field: Callable (t, x) → u
        t: Time of evaluation
        x: Position of evaluation
        h: Step, defaults to ``settings.FD_STEP``

    Returns:
        Tuple (u_t, u_x, u_xx) of complex numbers
    """
    h = settings.FD_STEP if h is None else h
    fx = _stencil(field, t, x, h, "x")
    ft = _stencil(field, t, x, h, "t")
    u_x = (fx[0] - 8 * fx[1] + 8 * fx[3] - fx[4]) / (12 * h)
    u_xx = (-fx[0] + 16 * fx[1] - 30 * fx[2] + 16 * fx[3] - fx[4]) / (12 * h * h)
    u_t = (ft[0] - 8 * ft[1] + 8 * ft[3] - ft[4]) / (12 * h)
    return complex(u_t), complex(u_x), complex(u_xx)


def richardson_gap(field: Field, t: float, x: float, h: float | None = None) -> float:
    """Largest change in the derivative estimates when the step is halved."""
    h = settings.FD_STEP if h is None else h
    coarse = numeric_derivatives(field, t, x, h)
    fine = numeric_derivatives(field, t, x, h / 2)
    return max(abs(a - b) for a, b in zip(coarse, fine))


def extrapolated_derivatives(field: Field, t: float, x: float, h: float | None = None):
    """(u_t, u_x, u_xx) with the leading error of the fourth-order stencil removed.

    Combines the estimates at steps h and h/2 as (16·D(h/2) − D(h))/15, which
    is sixth-order accurate.
    """
    h = settings.FD_STEP if h is None else h
    coarse = numeric_derivatives(field, t, x, h)
    fine = numeric_derivatives(field, t, x, h / 2)
    return tuple(complex((16 * f - c) / 15) for c, f in zip(coarse, fine))


def nls_residual(field: Field, t: float, x: float) -> float:
    """|i u_t + u_xx + 2|u|²u| at one point."""
    u = complex(field(t, x))
    u_t, _, u_xx = numeric_derivatives(field, t, x)
    return abs(1j * u_t + u_xx + 2 * abs(u) ** 2 * u)


def _parabolic_vertex(x0: float, h: float, f_minus: float, f0: float, f_plus: float) -> float:
    denom = f_minus - 2 * f0 + f_plus
    if denom == 0:
        return x0
    return x0 + 0.5 * h * (f_minus - f_plus) / denom


def locate_peak(
    field: Field,
    t: float,
    x_guess: float,
    half_window: float,
    min_height: float,
    step: float | None = None,
) -> float:
    """Position of the |field| maximum nearest ``x_guess`` at time ``t``.

    A coarse scan of the window is followed by two rounds of three-point
    parabolic refinement.

    Raises:
        PeakNotFound: If no interior local maximum reaches ``min_height``
    """
    step = settings.PEAK_SEARCH_STEP if step is None else step
    count = int(np.ceil(2 * half_window / step)) + 1
    xs = np.linspace(x_guess - half_window, x_guess + half_window, count)
    amp = np.abs(np.broadcast_to(field(t, xs), xs.shape))

    core = amp[1:-1]
    is_peak = (core >= amp[:-2]) & (core >= amp[2:]) & (core >= min_height)
    candidates = np.nonzero(is_peak)[0] + 1
    if candidates.size == 0:
        raise PeakNotFound(f"no peak above {min_height:.3g} within {half_window:.3g} of x={x_guess:.3g} at t={t:.3g}")
    i = candidates[np.argmin(np.abs(xs[candidates] - x_guess))]
    h = xs[1] - xs[0]
    center = _parabolic_vertex(xs[i], h, amp[i - 1], amp[i], amp[i + 1])

    fine_h = h / 20
    fine = center + fine_h * np.arange(-20, 21)
    fine_amp = np.abs(np.broadcast_to(field(t, fine), fine.shape))
    k = int(np.clip(np.argmax(fine_amp), 1, fine.size - 2))
    return float(_parabolic_vertex(fine[k], fine_h, fine_amp[k - 1], fine_amp[k], fine_amp[k + 1]))


# Invariant residuals

def projector_law_residual(state: ChainState) -> float:
    """max of ‖P² − P‖, ‖P − P†‖ and |tr P − 1| over the state's projectors."""
    if state.n == 0:
        return 0.0
    p = state.projectors
    idempotence = np.abs(p @ p - p).max()
    hermiticity = np.abs(p - np.conj(np.swapaxes(p, -1, -2))).max()
    trace = np.abs(p[..., 0, 0] + p[..., 1, 1] - 1).max()
    return float(max(idempotence, hermiticity, trace))


def kernel_residual(chain: DressingChain, t, x) -> float:
    """max_j ‖D[N](λ_j)ψ_j‖ / ‖ψ_j‖ at (t, x)."""
    state = build_chain_state(chain, t, x)
    worst = 0.0
    for point in chain.points:
        psi = seed_vector(point, state.t, state.x)
        image = mat_vec(eval_DN(state, chain, point.lam), psi)
        ratio = np.linalg.norm(image, axis=-1) / np.linalg.norm(psi, axis=-1)
        worst = max(worst, float(np.max(ratio)))
    return worst


def determinant_residual(chain: DressingChain, t, x, lam: complex) -> float:
    """Relative gap between det D[N](λ) and ∏(λ − λ_j)(λ − λ_j*)."""
    state = build_chain_state(chain, t, x)
    expected = np.prod([(lam - p.lam) * (lam - np.conj(p.lam)) for p in chain.points])
    actual = mat_det(eval_DN(state, chain, lam))
    return float(np.max(np.abs(actual - expected)) / max(abs(expected), 1e-300))


def dressing_symmetry_residual(chain: DressingChain, t, x, lam: complex) -> float:
    """max |conj(D[N](λ*)) − σ D[N](λ) σ⁻¹| entrywise."""
    state = build_chain_state(chain, t, x)
    lhs = np.conj(eval_DN(state, chain, np.conj(lam)))
    rhs = SIGMA @ eval_DN(state, chain, lam) @ SIGMA.T
    return float(np.abs(lhs - rhs).max())
