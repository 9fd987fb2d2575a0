"""Tests for the defect coupling of the two half-line dressings."""

import numpy as np
import pytest

from defect_nls.engine.darboux import chain_field, locate_peak, nls_residual
from defect_nls.engine.defect import (
    DEFECT_X,
    b_infinity,
    boundary_constraint_residual,
    build_paired_system,
    defect_residual,
    destructive_solution,
    det_invariance_residual,
    g0_eval,
    gn_eval,
    gn_form_readout,
    kernel_transport_residual,
    lambda0,
    omega,
    pair_init_vectors,
    permutability_residual,
    side_fields,
)
from defect_nls.errors import (
    ComplexOmega,
    DuplicateEigenvalue,
    ForbiddenEigenvalue,
    InvariantViolation,
    SingularDressing,
    UnsupportedSeed,
    ZeroVector,
)
from defect_nls.models.spectral import Branch, DefectParams, DestructiveSystem, DressingChain, Side, SpectralPoint

from .conftest import random_points


@pytest.fixture(name="stationary_system")
def stationary_system_fixture(params, unit_point):
    """λ = i with init (1, 1) behind a defect with α = 0, β = 1."""
    return build_paired_system(params, [unit_point])


@pytest.fixture(name="moving_system")
def moving_system_fixture():
    """Two solitons with opposite velocities, α = 0.5, β = 1."""
    points = [SpectralPoint(lam=1 + 1j, init=(1, 1)), SpectralPoint(lam=-1 + 1.2j, init=(1, 1))]
    return build_paired_system(DefectParams(alpha=0.5, beta=1.0), points)


@pytest.mark.parametrize(
    "alpha, beta, branch, expected",
    [
        (0.0, 1.0, Branch.PLUS, -0.5j),
        (1.0, 1.0, Branch.PLUS, -(1 + 1j) / 2),
        (0.0, 1.0, Branch.MINUS, 0.5j),
    ],
)
def test_lambda0(alpha, beta, branch, expected):
    """Test λ₀ = −(α ± iβ)/2."""
    assert lambda0(DefectParams(alpha=alpha, beta=beta, branch=branch)) == pytest.approx(expected)


def test_zero_beta_refused():
    """Test that β = 0 is an invariant violation on beta."""
    with pytest.raises(InvariantViolation) as excinfo:
        DefectParams(alpha=0.0, beta=0.0)
    assert excinfo.value.field == "beta"


def test_g0_at_zero(params):
    """Test G₀(0) = diag(i, −i) for α = 0, β = 1."""
    np.testing.assert_allclose(g0_eval(params, 0, 0, 0.0), np.diag([1j, -1j]))


def test_g0_structure(params):
    """Test that G₀ vanishes in its (1,1) entry at λ₀ and has the expected determinant."""
    lam0 = lambda0(params)
    assert g0_eval(params, 0, 0, lam0)[0, 0] == 0
    lam = 0.3 + 0.7j
    assert np.linalg.det(b_infinity(params, lam)) == pytest.approx(4 * (lam - lam0) * (lam - np.conj(lam0)))


def test_g0_nonzero_seed(params):
    """Test that only the zero seed pair is accepted."""
    with pytest.raises(UnsupportedSeed):
        g0_eval(params, 1.0, 0, 0.0)


@pytest.mark.parametrize("branch, ratio", [(Branch.PLUS, 3.0), (Branch.MINUS, 1 / 3)])
def test_pair_init_ratio(unit_point, branch, ratio):
    """Test the component ratio of the paired init for λ = i."""
    paired = pair_init_vectors(DefectParams(alpha=0.0, beta=1.0, branch=branch), unit_point)
    assert paired.init[0] / paired.init[1] == pytest.approx(ratio)


def test_pair_init_forbidden(unit_point):
    """Test that λ = λ₀* cannot be paired."""
    with pytest.raises(ForbiddenEigenvalue):
        pair_init_vectors(DefectParams(alpha=0.0, beta=2.0), unit_point)


def test_build_paired_system(stationary_system):
    """Test chains, λ₀ and the paired init (3i/2, i/2)."""
    assert stationary_system.lambda0 == pytest.approx(-0.5j)
    assert stationary_system.psi0.lam == stationary_system.lambda0
    np.testing.assert_allclose(stationary_system.left.points[0].init, [1.5j, 0.5j])
    np.testing.assert_array_equal(stationary_system.left.lams, stationary_system.right.lams)


def test_build_paired_system_empty(params):
    """Test that N = 0 gives G_N = G₀/2."""
    system = build_paired_system(params, [])
    assert system.right.n == system.left.n == 0
    np.testing.assert_allclose(gn_eval(system, 0.3, 0.2 + 0.1j), b_infinity(params, 0.2 + 0.1j) / 2)
    assert defect_residual(system, 0.0) == (0.0, 0.0)


def test_build_paired_system_duplicates(params):
    """Test that repeated eigenvalues are refused."""
    with pytest.raises(DuplicateEigenvalue):
        build_paired_system(params, [SpectralPoint(lam=1 + 1j), SpectralPoint(lam=1 + 1j)])


def test_build_paired_system_zero_psi0(params, unit_point):
    """Test that ψ₀ needs a nonzero init."""
    with pytest.raises(ZeroVector):
        build_paired_system(params, [unit_point], psi0_init=(0, 0))


def test_stationary_readout(stationary_system):
    """Test the defect data read back at t = 0 for the stationary example."""
    readout = gn_form_readout(stationary_system, 0.0)
    assert readout.alpha_hat == pytest.approx(0.0, abs=1e-12)
    assert readout.beta_sq_hat == pytest.approx(1.0)
    assert readout.defect_sign == -1
    assert readout.branch_hat is Branch.MINUS
    assert readout.offdiag_jump == pytest.approx(1.2 - 2.0)
    assert readout.linearity_error < 1e-12


def test_stationary_fields_at_defect(stationary_system):
    """Test u(0, 0) = 2 and ũ(0, 0) = 1.2."""
    right, left = side_fields(stationary_system)
    assert right(0.0, DEFECT_X) == pytest.approx(2.0)
    assert left(0.0, DEFECT_X) == pytest.approx(1.2)


@pytest.mark.parametrize("t", np.linspace(-2.0, 2.0, 9))
def test_stationary_defect_residual(stationary_system, t):
    """Test both defect conditions for the stationary soliton."""
    r1, r2 = defect_residual(stationary_system, t)
    assert r1 < 1e-6
    assert r2 < 1e-6


def test_mismatched_pairing_breaks_defect(params, unit_point):
    """Test that reusing the u-side inits violates the defect conditions."""
    system = build_paired_system(params, [unit_point], paired=False)
    r1, _ = defect_residual(system, 0.0)
    assert r1 == pytest.approx(4.0, rel=1e-6)


@pytest.mark.parametrize("seed", [0, 1, 2, 3, 4])
@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("alpha", [0.0, 0.5])
@pytest.mark.parametrize("beta", [1.0, 3.0])
def test_defect_residual_random(seed, n, alpha, beta):
    """Test the defect conditions for random N-soliton pairs at 25 times."""
    system = build_paired_system(DefectParams(alpha=alpha, beta=beta), random_points(n, seed=seed))
    for t in np.linspace(-3.0, 3.0, 25):
        assert max(defect_residual(system, t)) < 1e-6


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_nls_residual_both_sides(n):
    """Test that u and ũ of a paired system both solve the NLS equation."""
    system = build_paired_system(DefectParams(alpha=0.5, beta=1.0), random_points(n, seed=30 + n))
    rng = np.random.default_rng(30 + n)
    for field in side_fields(system):
        for t, x in rng.uniform(-3, 3, size=(100, 2)):
            assert nls_residual(field, t, x) < 1e-6


def test_readout_random():
    """Test that α, β² and the linear form are recovered for N = 2."""
    params = DefectParams(alpha=0.7, beta=-1.3)
    system = build_paired_system(params, random_points(2, seed=5))
    for t in (-1.0, 0.0, 2.0):
        readout = gn_form_readout(system, t)
        assert readout.alpha_hat == pytest.approx(0.7, abs=1e-8)
        assert readout.beta_sq_hat == pytest.approx(1.69, abs=1e-8)
        assert readout.linearity_error < 1e-9


def test_offdiag_jump_matches_fields():
    """Test that 2i·c₁₂ equals ũ − u at x = 0."""
    system = build_paired_system(DefectParams(alpha=0.3, beta=2.0), random_points(2, seed=8))
    right, left = side_fields(system)
    for t in (-1.5, 0.5):
        jump = left(t, DEFECT_X) - right(t, DEFECT_X)
        assert gn_form_readout(system, t).offdiag_jump == pytest.approx(jump, abs=1e-9)


@pytest.mark.parametrize("t", [-50.0, 50.0])
def test_branch_far_from_collision(moving_system, t):
    """Test that G_N reads back the configured branch once the solitons have left."""
    assert gn_form_readout(moving_system, t).branch_hat is moving_system.defect.branch


def test_matrix_identities(moving_system):
    """Test permutability, det G_N and kernel transport."""
    for t, lam in zip((-1.0, 0.0, 0.7), (0.3 + 0.4j, -1.1 - 0.2j, 0.5 + 0j)):
        assert permutability_residual(moving_system, t, lam) < 1e-9
        assert det_invariance_residual(moving_system, t, lam) < 1e-10
        assert kernel_transport_residual(moving_system, t) < 1e-9


def test_boundary_constraint(moving_system):
    """Test ∂ₜG_N = Ṽ[N]G_N − G_N V[N] at x = 0."""
    for t, lam in zip((-0.8, 0.2), (0.3 + 0.4j, -0.6 - 0.5j)):
        assert boundary_constraint_residual(moving_system, t, lam) < 1e-6


def test_gn_singular_at_eigenvalue(moving_system):
    """Test that G_N is not evaluated at some λ_j or λ_j*."""
    with pytest.raises(SingularDressing):
        gn_eval(moving_system, 0.0, 1 + 1j)
    with pytest.raises(SingularDressing):
        gn_eval(moving_system, 0.0, 1 - 1j)


@pytest.mark.parametrize(
    "beta, u, ut, expected",
    [(1.0, 0.5, 0.5, 1.0), (1.0, 0.0, 1j, 0.0), (2.0, 0.0, 1 + 1j, np.sqrt(2))],
)
def test_omega_values(beta, u, ut, expected):
    """Test Ω = √(β² − |ũ − u|²)."""
    assert omega(DefectParams(beta=beta), u, ut) == pytest.approx(expected)


def test_omega_complex():
    """Test that an inadmissible jump raises ComplexOmega."""
    with pytest.raises(ComplexOmega):
        omega(DefectParams(beta=1.0), 0.0, 2.0)


def test_destructive_zero_on_u_side(params):
    """Test that the u-side field vanishes identically."""
    system = destructive_solution(params)
    right, _ = side_fields(system)
    assert np.abs(right(0.3, np.linspace(0, 5, 6))).max() == 0


def test_destructive_amplitude(params):
    """Test the ũ-side hump of height |β| centred at the defect."""
    system = destructive_solution(params)
    _, left = side_fields(system)
    assert abs(left(0.0, DEFECT_X)) == pytest.approx(1.0)
    assert np.abs(left(0.0, np.linspace(-5, 0, 51))).max() == pytest.approx(1.0)


def test_destructive_velocity():
    """Test that the hump moves with velocity 2α."""
    system = destructive_solution(DefectParams(alpha=0.5, beta=1.0))
    field = chain_field(system.left)
    times = np.linspace(-5.0, 5.0, 11)
    peaks = [locate_peak(field, t, t, 2.0, 0.5) for t in times]
    slope, _ = np.polyfit(times, peaks, 1)
    assert slope == pytest.approx(1.0, abs=2e-2)


@pytest.mark.parametrize("alpha", [0.0, 0.5])
def test_destructive_residuals(alpha):
    """Test defect conditions, det G₁ and kernel transport."""
    system = destructive_solution(DefectParams(alpha=alpha, beta=1.0))
    for t in (-2.0, -0.5, 0.4, 1.5):
        assert max(defect_residual(system, t)) < 1e-6
        assert det_invariance_residual(system, t, 0.2 + 0.9j) < 1e-10
        assert kernel_transport_residual(system, t) < 1e-9
        assert boundary_constraint_residual(system, t, 0.2 + 0.9j) < 1e-6


def test_mirrored_destructive_fields(params):
    """Test a zero ũ-side and a hump of height |β| on the u-side."""
    system = destructive_solution(params, side=Side.RIGHT)
    assert system.dressed_side is Side.RIGHT
    right, left = side_fields(system)
    assert np.abs(left(0.3, np.linspace(-5, 0, 6))).max() == 0
    assert abs(right(0.0, DEFECT_X)) == pytest.approx(1.0)
    assert np.abs(right(0.0, np.linspace(0, 5, 51))).max() == pytest.approx(1.0)


@pytest.mark.parametrize("alpha", [0.0, 0.5])
def test_mirrored_destructive_residuals(alpha):
    """Test defect conditions, det G₁ and kernel transport with the u-side dressed."""
    params = DefectParams(alpha=alpha, beta=1.0)
    system = destructive_solution(params, center_init=(1, 2), side=Side.RIGHT)
    for t in (-2.0, -0.5, 0.4, 1.5):
        assert max(defect_residual(system, t)) < 1e-6
        assert det_invariance_residual(system, t, 0.2 + 0.9j) < 1e-10
        assert kernel_transport_residual(system, t) < 1e-9
        assert boundary_constraint_residual(system, t, 0.2 + 0.9j) < 1e-6


def test_mirrored_destructive_readout():
    """Test that G₁ keeps the monic linear form and reads back α and β²."""
    system = destructive_solution(DefectParams(alpha=0.5, beta=2.0), side=Side.RIGHT)
    readout = gn_form_readout(system, 0.3)
    assert readout.alpha_hat == pytest.approx(0.5, abs=1e-12)
    assert readout.beta_sq_hat == pytest.approx(4.0, abs=1e-12)
    assert readout.linearity_error < 1e-12
    right, _ = side_fields(system)
    assert readout.offdiag_jump == pytest.approx(-right(0.3, DEFECT_X), abs=1e-12)


def test_destructive_dresses_one_side_only(params):
    """Test that both sides dressed is not a destructive system."""
    point = SpectralPoint(lam=lambda0(params))
    with pytest.raises(InvariantViolation):
        DestructiveSystem(
            defect=params,
            right=DressingChain(points=(point,), side=Side.RIGHT),
            left=DressingChain(points=(point,), side=Side.LEFT),
            lambda0=lambda0(params),
        )


def test_destructive_zero_center_init(params):
    """Test that the centre init must be nonzero."""
    with pytest.raises(ZeroVector):
        destructive_solution(params, center_init=(0, 0))
