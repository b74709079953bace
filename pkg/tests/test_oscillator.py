from __future__ import annotations

import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polysu11.algebra import AlgebraSpec, DomainError, deformation_roots, structure_factor
from polysu11.oscillator import (
    DiscretizationWarning,
    OscillatorParams,
    ValidityError,
    cubic_algebra_spec,
    d_algebra_bracket_defect,
    effective_energy,
    grid_spectrum,
    ladder_coefficients,
    partner_potentials,
    potential_values,
    potentials_from_superpotential,
    spectrum,
    spectrum_general,
    validity,
)

from conftest import GAMMAS

QUARTER = OscillatorParams.g_zero(0.25)


def test_derived_parameters():
    assert QUARTER.epsilon == -0.75
    assert QUARTER.g == 0.0
    assert QUARTER.c == QUARTER.d == 0.875


def test_validity_examples():
    assert validity(OscillatorParams(0.25, -0.75)) == (True, True)
    assert validity(OscillatorParams(0.6, -1.1)).cubic_ok is False
    assert validity(OscillatorParams(0.3, 1.0)).convergent is True
    # g != 0 is convergent but not cubic
    assert validity(OscillatorParams(0.25, 0.0)) == (True, False)
    # eps + 2 eps gamma + 2 <= 0
    assert validity(OscillatorParams(0.25, -1.5)).convergent is False


def test_rejects_negative_gamma():
    with pytest.raises(DomainError):
        OscillatorParams(-0.1, 0.0)


# -- potentials ---------------------------------------------------------------

@pytest.mark.parametrize("x", [0.3, 1.0, 2.7, 8.0])
def test_vplus_on_g_zero_line(x):
    pot = partner_potentials(QUARTER, x)
    # gamma(gamma+1)/2 = 5/32 at gamma = 1/4; the additive constant vanishes with g
    assert pot.Vplus == pytest.approx(x * x / 2 + (5 / 32) / (x * x), rel=1e-15)
    assert pot.U == pytest.approx(x + 1.25 / x, rel=1e-15)


def test_trivial_kummer_numerator():
    params = OscillatorParams(0.3, 1.0)
    for x in (0.5, 1.5, 4.0):
        pot = partner_potentials(params, x)
        assert pot.f == 0.0
        U, dU = x + 1.3 / x, 1 - 1.3 / x ** 2
        assert pot.Vminus == pytest.approx(0.5 * (U * U - dU), rel=1e-15)


@pytest.mark.parametrize("gamma, eps", [(0.25, -0.75), (0.1, -0.6), (0.4, 0.3), (0.2, -0.2)])
def test_superpotential_route_agrees(gamma, eps):
    params = OscillatorParams(gamma, eps)
    x = np.linspace(0.05, 11.5, 200)
    plus, minus = potentials_from_superpotential(params, x)
    np.testing.assert_allclose(plus, potential_values(params, x, "plus"), rtol=1e-8, atol=1e-8)
    np.testing.assert_allclose(minus, potential_values(params, x, "minus"), rtol=1e-8, atol=1e-8)
    assert partner_potentials(params, 1.0).Vminus == pytest.approx(float(minus[np.argmin(abs(x - 1.0))]), rel=0.1)


def test_riccati_relation_with_numeric_derivative():
    params = OscillatorParams(0.25, -0.75)
    h = 1e-5
    for x in (0.4, 1.0, 3.0, 7.0):
        f = partner_potentials(params, x).f
        fp = (partner_potentials(params, x + h).f - partner_potentials(params, x - h).f) / (2 * h)
        U = x + 1.25 / x
        assert f * f + 2 * U * f + fp == pytest.approx(2 * (params.epsilon - 1), abs=1e-7)


def test_potential_domain():
    with pytest.raises(DomainError):
        partner_potentials(QUARTER, 0.0)
    with pytest.raises(ValidityError):
        partner_potentials(OscillatorParams(0.25, -1.5), 1.0)
    with pytest.raises(ValueError):
        potential_values(QUARTER, 1.0, "both")


# -- spectrum -----------------------------------------------------------------

def test_spectrum_examples():
    assert spectrum(QUARTER, 0) == 1.75
    assert spectrum(QUARTER, 3) == 7.75
    np.testing.assert_array_equal(spectrum(QUARTER, np.arange(4)), spectrum_general(QUARTER, np.arange(4)))


def test_spectrum_requires_cubic_window():
    with pytest.raises(ValidityError):
        spectrum(OscillatorParams(0.25, 0.0), 1)
    with pytest.raises(ValidityError):
        spectrum(OscillatorParams(0.6, -1.1), 0)


def test_effective_hamiltonian_is_number_operator():
    np.testing.assert_allclose(effective_energy(QUARTER, np.arange(5)), np.arange(5))
    np.testing.assert_allclose(effective_energy(QUARTER, np.arange(5), omega=2.5), 2.5 * np.arange(5))


# -- cubic algebra ------------------------------------------------------------

def test_cubic_spec_example():
    spec = cubic_algebra_spec(QUARTER)
    assert spec == AlgebraSpec(2, (7 / 16, 4.0), 7 / 8)
    assert sorted(z.real for z in deformation_roots(spec)) == pytest.approx([-7 / 8, 1 / 8], abs=1e-14)


def test_cubic_spec_near_upper_gamma():
    gamma = 0.5 - 1e-6
    spec = cubic_algebra_spec(OscillatorParams.g_zero(gamma))
    assert 0 < spec.alpha[0] < 1e-5


@pytest.mark.parametrize("gamma", [0.05, 0.1, 0.25, 0.4, 0.49])
def test_roots_closed_form(gamma):
    roots = sorted(z.real for z in deformation_roots(cubic_algebra_spec(OscillatorParams.g_zero(gamma))))
    assert roots == pytest.approx(sorted([(1 - 2 * gamma) / 4, -(2 * gamma + 3) / 4]), abs=1e-13)


def test_ladder_examples():
    lad = ladder_coefficients(QUARTER, 0)
    assert lad.up == pytest.approx(math.sqrt(735 / 64), rel=1e-15)
    assert lad.down == 0.0
    spec = cubic_algebra_spec(QUARTER)
    assert ladder_coefficients(QUARTER, 2).up ** 2 / structure_factor(spec, 3) == pytest.approx(1.0, rel=1e-14)
    # D_- is the adjoint of D_+: down(n+1) = up(n)
    for n in range(6):
        assert ladder_coefficients(QUARTER, n + 1).down == pytest.approx(ladder_coefficients(QUARTER, n).up)


@pytest.mark.parametrize("gamma", GAMMAS)
def test_ladder_matches_structure_factor(gamma):
    params = OscillatorParams.g_zero(gamma)
    spec = cubic_algebra_spec(params)
    for n in range(21):
        assert ladder_coefficients(params, n).up ** 2 == pytest.approx(structure_factor(spec, n + 1), rel=1e-12)


@given(st.floats(0.0, 0.49), st.floats(-0.95, 0.45))
def test_general_g_bracket(gamma, eps):
    params = OscillatorParams(gamma, eps)
    if validity(params).convergent:
        assert d_algebra_bracket_defect(params) <= 1e-10


def test_general_g_bracket_off_the_cubic_line():
    params = OscillatorParams(0.25, 0.2)
    assert params.g != 0
    assert d_algebra_bracket_defect(params) <= 1e-12


# -- grid oracle --------------------------------------------------------------

def test_grid_harmonic_sanity():
    levels = grid_spectrum(QUARTER, potential=lambda x: 0.5 * x * x, levels=5)
    np.testing.assert_allclose(levels, 2 * np.arange(5) + 1.5, atol=1e-3)


@pytest.mark.parametrize("which", ["plus", "minus"])
def test_grid_spectrum_quarter(which):
    levels = grid_spectrum(QUARTER, which)
    np.testing.assert_allclose(levels, 2 * np.arange(6) + 1.75, atol=1e-3)
    assert levels == sorted(levels)


def test_grid_spectrum_broken_susy_general_eps():
    params = OscillatorParams(0.2, -0.3)
    plus = grid_spectrum(params, "plus", levels=4)
    minus = grid_spectrum(params, "minus", levels=4)
    np.testing.assert_allclose(plus, minus, atol=1e-3)
    np.testing.assert_allclose(plus, spectrum_general(params, np.arange(4)), atol=1e-3)


def test_grid_preconditions():
    with pytest.raises(ValueError):
        grid_spectrum(QUARTER, "plus", points=500)
    with pytest.raises(ValueError):
        grid_spectrum(QUARTER, "plus", r_max=4.0)
    with pytest.raises(ValueError):
        grid_spectrum(QUARTER, "sideways")


def test_grid_discretization_warning():
    # a stiff well resolved by only a handful of points per wavelength
    with pytest.warns(DiscretizationWarning):
        grid_spectrum(QUARTER, potential=lambda x: 2e4 * (x - 6.0) ** 2, points=1000, levels=3)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        grid_spectrum(QUARTER, "plus")
