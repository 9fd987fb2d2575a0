"""Tests for the reflectionless oracle and the transmission shifts."""

import math

import numpy as np
import pytest

from defect_nls.engine.darboux import chain_field
from defect_nls.engine.defect import build_paired_system
from defect_nls.engine.scattering import (
    canonical_point,
    init_to_norming,
    measure_shift,
    predict_transmission,
    relate_norming,
    solve_reflectionless,
    transmission_quotient,
)
from defect_nls.errors import ForbiddenEigenvalue, OverflowRange, PeakNotFound, RealEigenvalue, ZeroComponent
from defect_nls.models.spectral import Branch, DefectParams, DressingChain, ScatteringDatum, SpectralPoint
from defect_nls.utils import wrap_phase

from .conftest import random_points


def _oracle_grid(data, axis):
    return np.array([[solve_reflectionless(data, t, x) for x in axis] for t in axis])


def test_empty_data():
    """Test that no eigenvalues means the zero potential."""
    assert solve_reflectionless([], 0.3, -1.0) == 0


@pytest.mark.parametrize("norming, expected", [(2, -2j), (-2j, 2)])
def test_single_eigenvalue_at_origin(norming, expected):
    """Test u(0, 0) for λ = i and two norming constants."""
    data = [ScatteringDatum(lam=1j, C=norming)]
    assert solve_reflectionless(data, 0.0, 0.0) == pytest.approx(expected)


def test_init_to_norming_unit(unit_point):
    """Test C = −2i for λ = i with init (1, 1)."""
    (datum,) = init_to_norming(DressingChain(points=(unit_point,)))
    assert datum.C == pytest.approx(-2j)
    assert datum.x_j == pytest.approx(0.0)


def test_init_to_norming_zero_component():
    """Test that an invisible soliton has no norming constant."""
    with pytest.raises(ZeroComponent):
        init_to_norming(DressingChain(points=(SpectralPoint(lam=1j, init=(1, 0)),)))


def test_oracle_overflow():
    """Test OverflowRange far from the solitons."""
    with pytest.raises(OverflowRange):
        solve_reflectionless([ScatteringDatum(lam=1j, C=1)], 0.0, 400.0)


@pytest.mark.parametrize("n, rng_seed", [(2, 1), (2, 2), (3, 3), (3, 4)])
def test_oracle_matches_dressing(n, rng_seed):
    """Test the reflectionless potential against the Darboux potential."""
    chain = DressingChain(points=tuple(random_points(n, seed=rng_seed)))
    axis = np.linspace(-1.0, 1.0, 11)
    t, x = np.meshgrid(axis, axis, indexing="ij")
    oracle = _oracle_grid(init_to_norming(chain), axis)
    assert np.abs(chain_field(chain)(t, x) - oracle).max() < 1e-8


def test_oracle_two_stationary(unit_point):
    """Test λ = i, 2i with inits (1, 1) against the dressing."""
    chain = DressingChain(points=(unit_point, SpectralPoint(lam=2j, init=(1, 1))))
    axis = np.linspace(-1.5, 1.5, 7)
    t, x = np.meshgrid(axis, axis, indexing="ij")
    assert np.abs(chain_field(chain)(t, x) - _oracle_grid(init_to_norming(chain), axis)).max() < 1e-8


def test_canonical_point_keeps_field():
    """Test that reflecting a lower half-plane point leaves the potential unchanged."""
    point = SpectralPoint(lam=1 - 1j, init=(1, 2))
    reflected = canonical_point(point)
    assert reflected.lam == 1 + 1j
    xs = np.linspace(-3, 3, 13)
    original = chain_field(DressingChain(points=(point,)))(0.2, xs)
    assert np.abs(chain_field(DressingChain(points=(reflected,)))(0.2, xs) - original).max() < 1e-12


def test_canonical_point_upper_unchanged(unit_point):
    """Test that an upper half-plane point is returned as is."""
    assert canonical_point(unit_point) is unit_point


def test_predict_transmission_stationary(params):
    """Test dx = log(1/3)/2 and no phase shift for λ = i."""
    shift = predict_transmission(params, 1j)
    assert shift.dx == pytest.approx(-0.5493061443340549, abs=1e-14)
    assert shift.dphi == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("beta, expected", [(1.0, math.log(5 / 13) / 4), (3.0, math.log(5 / 29) / 4)])
def test_predict_transmission_moving(beta, expected):
    """Test the spatial shift of λ = 1 + i for two defect strengths."""
    assert predict_transmission(DefectParams(beta=beta), 1 + 1j).dx == pytest.approx(expected)


@pytest.mark.parametrize("beta, expected", [(1.0, 0.0), (3.0, math.pi)])
def test_phase_step_in_beta(beta, expected):
    """Test that the phase shift of λ = i jumps from 0 to π as β passes 2."""
    assert predict_transmission(DefectParams(beta=beta), 1j).dphi == pytest.approx(expected, abs=1e-12)


def test_predict_transmission_forbidden():
    """Test λ_j = λ₀* is refused."""
    with pytest.raises(ForbiddenEigenvalue):
        predict_transmission(DefectParams(alpha=0.0, beta=2.0), 1j)


def test_predict_transmission_real_eigenvalue(params):
    """Test that λ_j must lie in the upper half-plane."""
    with pytest.raises(RealEigenvalue):
        predict_transmission(params, 1.0 + 0j)


def test_shift_vanishes_for_large_alpha():
    """Test dx → 0 as α grows."""
    assert abs(predict_transmission(DefectParams(alpha=1e3, beta=1.0), 1 + 1j).dx) < 1e-3


def test_phase_tends_to_pi_for_large_beta():
    """Test dphi → π as β grows."""
    dphi = predict_transmission(DefectParams(beta=1e3), 1 + 1j).dphi
    assert abs(wrap_phase(dphi - math.pi)) < 1e-2


def test_shift_monotone_in_alpha():
    """Test that |dx| decreases as α grows for λ = i."""
    shifts = [abs(predict_transmission(DefectParams(alpha=a, beta=1.0), 1j).dx) for a in np.linspace(0, 5, 11)]
    assert all(a > b for a, b in zip(shifts, shifts[1:]))


def test_branch_flip_inverts_quotient():
    """Test that the two branches give reciprocal quotients."""
    plus = DefectParams(alpha=0.4, beta=1.5)
    lam = 0.3 + 0.9j
    product = transmission_quotient(plus, lam) * transmission_quotient(plus.with_branch(Branch.MINUS), lam)
    assert product == pytest.approx(1.0)


def test_relate_norming(params):
    """Test C̃ = C/3 for λ = i."""
    related = relate_norming(params, ScatteringDatum(lam=1j, C=2))
    assert related.C == pytest.approx(2 / 3)


def test_relate_norming_branch_round_trip():
    """Test that relating on one branch and back on the other is the identity."""
    params = DefectParams(alpha=0.4, beta=1.5)
    datum = ScatteringDatum(lam=0.3 + 0.9j, C=1.2 - 0.7j)
    back = relate_norming(params.with_branch(Branch.MINUS), relate_norming(params, datum))
    assert back.C == pytest.approx(datum.C, abs=1e-12)


def test_relate_norming_matches_prediction():
    """Test that the related datum moves by the predicted dx and dphi."""
    params = DefectParams(alpha=0.2, beta=1.7)
    datum = ScatteringDatum.from_position(0.6 + 0.8j, 0.5, 0.3)
    related = relate_norming(params, datum)
    predicted = predict_transmission(params, datum.lam)
    assert related.x_j - datum.x_j == pytest.approx(predicted.dx)
    assert wrap_phase(related.phi_j - datum.phi_j - predicted.dphi) == pytest.approx(0.0, abs=1e-12)


def test_paired_norming_constants():
    """Test that the ũ-side chain carries the related norming constants."""
    params = DefectParams(alpha=0.5, beta=1.3)
    system = build_paired_system(params, random_points(2, seed=21))
    for right, left in zip(init_to_norming(system.right), init_to_norming(system.left)):
        assert left.C == pytest.approx(relate_norming(params, right).C, rel=1e-10)


def test_measure_shift_single():
    """Test the measured shift of λ = 1 + i against the prediction."""
    params = DefectParams(alpha=0.0, beta=1.0)
    system = build_paired_system(params, [SpectralPoint(lam=1 + 1j, init=(1, 1))])
    measured = measure_shift(system, 0)
    predicted = predict_transmission(params, 1 + 1j)
    assert measured.dx == pytest.approx(predicted.dx, abs=1e-2)
    assert abs(wrap_phase(measured.dphi - predicted.dphi)) < 1e-2


def test_measure_shift_two_solitons():
    """Test measured shifts of two solitons with opposite velocities."""
    params = DefectParams(alpha=0.5, beta=1.0)
    points = [SpectralPoint(lam=1 + 1j, init=(1, 1)), SpectralPoint(lam=-1 + 1j, init=(1, 1))]
    system = build_paired_system(params, points)
    for j, point in enumerate(points):
        measured = measure_shift(system, j)
        predicted = predict_transmission(params, point.lam)
        assert measured.dx == pytest.approx(predicted.dx, abs=2e-2)
        assert abs(wrap_phase(measured.dphi - predicted.dphi)) < 2e-2


def test_measure_shift_stationary(params, unit_point):
    """Test that a soliton with ξ = 0 has no measurable shift."""
    with pytest.raises(PeakNotFound):
        measure_shift(build_paired_system(params, [unit_point]), 0)
