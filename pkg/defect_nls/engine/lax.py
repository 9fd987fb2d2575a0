"""Lax pair of the focusing NLS equation and its zero-seed vector solutions.

U = −iλσ₃ + Q and V = −2iλ²σ₃ + Q̃, with Q = [[0, u], [−u*, 0]] and
Q̃ = [[i|u|², 2λu + iu_x], [−2λu* + iu_x*, −i|u|²]]. Their compatibility is
i u_t + u_xx + 2|u|²u = 0.
"""

import numpy as np

from defect_nls.config import settings
from defect_nls.engine.numerics import Mat2C, Vec2C, readonly
from defect_nls.errors import OverflowRange, UnsupportedSeed
from defect_nls.models.spectral import PotentialSample, SpectralPoint

SIGMA3 = readonly([[1, 0], [0, -1]])
SIGMA = readonly([[0, 1], [-1, 0]])
SIGMA2 = readonly([[0, -1j], [1j, 0]])

SUPPORTED_SEEDS = ("zero",)


def theta(t, x, lam):
    """Phase θ(t, x, λ) = λx + 2λ²t; broadcasts over arrays."""
    return lam * x + 2 * lam**2 * t


def q_matrix(p: PotentialSample) -> Mat2C:
    return np.array([[0, p.u], [-np.conj(p.u), 0]], dtype=np.complex128)


def qtilde_matrix(p: PotentialSample, lam: complex) -> Mat2C:
    u, u_x = p.u, p.u_x
    density = abs(u) ** 2
    return np.array(
        [
            [1j * density, 2 * lam * u + 1j * u_x],
            [-2 * lam * np.conj(u) + 1j * np.conj(u_x), -1j * density],
        ],
        dtype=np.complex128,
    )


def lax_U(lam: complex, p: PotentialSample) -> Mat2C:
    return -1j * lam * SIGMA3 + q_matrix(p)


def lax_V(lam: complex, p: PotentialSample) -> Mat2C:
    return -2j * lam**2 * SIGMA3 + qtilde_matrix(p, lam)


def overflow_mask(lams, t, x) -> np.ndarray:
    """True where some |Im θ(t, x, λ_j)| exceeds ``IM_THETA_CAP``."""
    t, x = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
    mask = np.zeros(t.shape, dtype=bool)
    for lam in np.atleast_1d(lams):
        mask |= np.abs(np.imag(theta(t, x, lam))) > settings.IM_THETA_CAP
    return mask


def seed_vector(sp: SpectralPoint, t, x, seed: str = "zero") -> Vec2C:
    """Zero-seed solution ψ = e^{−iθσ₃}(u_j, v_j)ᵀ of the Lax system.

    Args:
        sp: Spectral point carrying λ_j and (u_j, v_j)
        t: Time, scalar or array
        x: Position, scalar or array broadcastable with ``t``
        seed: Seed solution tag; only ``"zero"`` is implemented

    Returns:
        Array of shape ``(*broadcast(t, x).shape, 2)``

    Raises:
        UnsupportedSeed: For any seed other than the zero solution
        OverflowRange: If |Im θ| exceeds ``IM_THETA_CAP`` anywhere
    """
    if seed not in SUPPORTED_SEEDS:
        raise UnsupportedSeed(f"seed {seed!r} is not supported")
    th = theta(np.asarray(t, dtype=float), np.asarray(x, dtype=float), sp.lam)
    if np.any(np.abs(np.imag(th)) > settings.IM_THETA_CAP):
        raise OverflowRange(f"|Im θ| above {settings.IM_THETA_CAP} for λ={sp.lam}")
    u0, v0 = sp.init
    return np.stack([u0 * np.exp(-1j * th), v0 * np.exp(1j * th)], axis=-1)
