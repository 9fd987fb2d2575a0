"""Complex linear algebra substrate.

2×2 matrices and 2-vectors are plain ``numpy`` complex arrays of shape
``(..., 2, 2)`` and ``(..., 2)``; every operation broadcasts over leading axes
so whole grids go through one call. Dense systems (the reflectionless
algebraic system) are solved by LU with partial pivoting from ``scipy``.
"""

import logging
import warnings

import numpy as np
import numpy.typing as npt
import scipy.linalg
from scipy.linalg import LinAlgError, LinAlgWarning

from defect_nls.config import settings
from defect_nls.errors import DimensionMismatch, NonFiniteValue, SingularMatrix

logger = logging.getLogger(__name__)

Mat2C = npt.NDArray[np.complex128]
Vec2C = npt.NDArray[np.complex128]


def readonly(values) -> np.ndarray:
    """Complex array copy with the writeable flag cleared."""
    array = np.array(values, dtype=np.complex128)
    array.flags.writeable = False
    return array


IDENTITY = readonly(np.eye(2))


def ensure_finite(values, what: str = "value") -> np.ndarray:
    """Return ``values`` as a complex array, rejecting NaN and infinity."""
    array = np.asarray(values, dtype=np.complex128)
    if not np.all(np.isfinite(array)):
        raise NonFiniteValue(f"{what} contains NaN or infinity")
    return array


def mat_mul(lhs: Mat2C, rhs: Mat2C) -> Mat2C:
    return np.matmul(lhs, rhs)


def mat_vec(m: Mat2C, v: Vec2C) -> Vec2C:
    return np.einsum("...ij,...j->...i", m, v)


def mat_det(m: Mat2C) -> complex | np.ndarray:
    m = np.asarray(m)
    return m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]


def mat_inv(m: Mat2C) -> Mat2C:
    """Inverse by the cofactor formula.

    Raises:
        SingularMatrix: If |det| ≤ SINGULAR_EPS · (max |entry|)² for any matrix
            in the stack
    """
    m = ensure_finite(m, "matrix")
    det = mat_det(m)
    scale = np.max(np.abs(m), axis=(-2, -1)) ** 2
    if np.any(np.abs(det) <= settings.SINGULAR_EPS * scale):
        raise SingularMatrix("2x2 matrix is singular to working precision")
    adjugate = np.empty_like(m)
    adjugate[..., 0, 0] = m[..., 1, 1]
    adjugate[..., 0, 1] = -m[..., 0, 1]
    adjugate[..., 1, 0] = -m[..., 1, 0]
    adjugate[..., 1, 1] = m[..., 0, 0]
    return adjugate / np.asarray(det)[..., None, None]


def hermitian_transpose(v: Vec2C) -> Vec2C:
    """Row form of v†; for 1-d storage this is the componentwise conjugate."""
    return np.conj(np.asarray(v, dtype=np.complex128))


def inner(v: Vec2C, w: Vec2C) -> complex | np.ndarray:
    """Hermitian inner product v†w over the last axis."""
    return np.sum(hermitian_transpose(v) * np.asarray(w), axis=-1)


def orthogonal_companion(v: Vec2C) -> Vec2C:
    """σ₂·conj(v), orthogonal to v; applying it twice gives −v."""
    v = np.asarray(v, dtype=np.complex128)
    return np.stack([-1j * np.conj(v[..., 1]), 1j * np.conj(v[..., 0])], axis=-1)


def solve_dense(a, rhs) -> np.ndarray:
    """Solve a·x = rhs for a small dense complex system.

    Rows are equilibrated before an LU factorization with partial pivoting.

    Args:
        a: Square complex matrix, at most ``DENSE_MAX_DIM`` wide
        rhs: Right-hand side of length n, or an (n, k) block

    Returns:
        Solution with the shape of ``rhs``

    Raises:
        DimensionMismatch: Non-square ``a``, wrong ``rhs`` length, or n over the cap
        SingularMatrix: Zero row, vanishing pivot, or residual above 1e-10
    """
    a = ensure_finite(a, "coefficient matrix")
    rhs = ensure_finite(rhs, "right-hand side")
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"coefficient matrix must be square, got {a.shape}")
    n = a.shape[0]
    if n > settings.DENSE_MAX_DIM:
        raise DimensionMismatch(f"system of size {n} exceeds the cap {settings.DENSE_MAX_DIM}")
    if rhs.shape[0] != n or rhs.ndim > 2:
        raise DimensionMismatch(f"right-hand side shape {rhs.shape} does not match n={n}")
    if n == 0:
        return rhs.copy()

    row_scale = np.max(np.abs(a), axis=1)
    if np.any(row_scale == 0):
        raise SingularMatrix("coefficient matrix has a zero row")
    scaled = a / row_scale[:, None]
    scaled_rhs = rhs / (row_scale[:, None] if rhs.ndim == 2 else row_scale)

    with warnings.catch_warnings():
        warnings.simplefilter("error", LinAlgWarning)
        try:
            lu, piv = scipy.linalg.lu_factor(scaled, check_finite=False)
        except (LinAlgWarning, LinAlgError) as exc:
            raise SingularMatrix(f"LU factorization failed: {exc}") from exc

    pivots = np.abs(np.diag(lu))
    if pivots.min() <= n * np.finfo(float).eps * pivots.max():
        raise SingularMatrix("vanishing pivot in dense solve")

    x = scipy.linalg.lu_solve((lu, piv), scaled_rhs, check_finite=False)
    residual = np.linalg.norm(a @ x - rhs)
    bound = 1e-10 * (np.linalg.norm(rhs) + np.linalg.norm(a) * np.linalg.norm(x))
    if residual > bound:
        logger.warning("dense solve residual %.3e above bound %.3e", residual, bound)
        raise SingularMatrix("dense solve residual too large")
    return x
