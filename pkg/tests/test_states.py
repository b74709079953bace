from __future__ import annotations

import cmath
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polysu11.algebra import AlgebraSpec, DomainError, NonPositiveFactorError, StructureSequence
from polysu11.oscillator import OscillatorParams, cubic_algebra_spec
from polysu11.rep import build_rep
from polysu11.states import (
    Family,
    build_state,
    inner_product,
    lowering_eigendefect,
    normalization_closed_form,
    normalization_series,
    radius_of_convergence,
    radius_ratio,
    time_evolve,
)

from conftest import ALPHAS, make_spec


def test_zero_label_is_fiducial(cubic_quarter):
    for family in ("bg", "p"):
        s = build_state(cubic_quarter, family, 0)
        assert s.N == 0
        assert s.coeffs.tolist() == [1.0]


def test_linear_bg_coefficients(linear_k1):
    s = build_state(linear_k1, "bg", 1.0)
    norm = float(mp.hyper([], [2], 1))
    for n in range(s.N + 1):
        expected = 1 / (math.factorial(n) * math.factorial(n + 1) * norm)  # n! (2)_n = n! (n+1)!
        assert abs(s.coeffs[n]) ** 2 == pytest.approx(expected, rel=1e-13)
    assert s.coeffs[1] / s.coeffs[0] == pytest.approx(1 / math.sqrt(2), rel=1e-15)


def test_cubic_bg_ratios(cubic_quarter):
    g = 0.25
    xi = 1.0
    s = build_state(cubic_quarter, "bg", xi)
    for n in range(s.N):
        ratio = (xi / 2) / math.sqrt((n + 1) * (n + g + 1.5) * (n + g / 2 + 0.75) * (n + g / 2 + 1.75))
        assert (s.coeffs[n + 1] / s.coeffs[n]).real == pytest.approx(ratio, rel=1e-13)


@pytest.mark.parametrize("family", ["bg", "p"])
def test_normalized_and_tail_bound(cubic_quarter, family):
    s = build_state(cubic_quarter, family, 2.0 - 1.0j, tol=1e-8)
    assert math.fsum(np.abs(s.coeffs) ** 2) == pytest.approx(1.0, abs=1e-12)
    fine = build_state(cubic_quarter, family, 2.0 - 1.0j, tol=1e-16)
    # the bound must overestimate the weight beyond N, measured on the finer truncation
    beyond = math.fsum(np.abs(fine.coeffs[s.N + 1:]) ** 2) / math.fsum(np.abs(fine.coeffs[: s.N + 1]) ** 2)
    assert beyond <= s.tail_bound
    assert s.tail_bound < 1e-8


def test_normalization_examples(linear_k1):
    assert normalization_closed_form(linear_k1, "bg", 1.0) == pytest.approx(1.5906368546373291, rel=1e-14)
    assert normalization_closed_form(linear_k1, "p", math.sqrt(0.5)) == pytest.approx(4.0, rel=1e-13)
    for family in ("bg", "p"):
        assert normalization_closed_form(linear_k1, family, 0.0) == 1.0
        assert normalization_series(linear_k1, family, 0.0) == 1.0


@pytest.mark.parametrize("p", [1, 2, 3])
@pytest.mark.parametrize("family", ["bg", "p"])
def test_normalization_closed_vs_series(p, family):
    spec = make_spec(p, 0.875)
    radius = radius_of_convergence(spec, family)
    top = 5.0 if math.isinf(radius) else 0.95 * math.sqrt(radius)
    for r in np.linspace(0.05, top, 12):
        closed = normalization_closed_form(spec, family, r)
        series = normalization_series(spec, family, r)
        assert closed == pytest.approx(series, rel=1e-10)


def test_normalization_with_complex_roots():
    spec = AlgebraSpec(2, (1.0, 1.0), 1.0)
    for r in (0.5, 2.0, 4.0):
        assert normalization_closed_form(spec, "bg", r) == pytest.approx(normalization_series(spec, "bg", r),
                                                                        rel=1e-10)


def test_inner_product_examples(linear_k1):
    s1 = build_state(linear_k1, "bg", 1.0)
    assert inner_product(s1, s1) == pytest.approx(1.0, abs=1e-14)
    s2 = build_state(linear_k1, "bg", 1j)
    # <xi|xi'> = 0F1(2; conj(xi) xi') / sqrt(0F1(2;|xi|^2) 0F1(2;|xi'|^2))
    ref = complex(mp.hyper([], [2], 1j)) / float(mp.hyper([], [2], 1))
    assert inner_product(s1, s2) == pytest.approx(ref, abs=1e-13)
    assert abs(inner_product(s1, s2)) < 1
    s0 = build_state(linear_k1, "bg", 0)
    assert inner_product(s1, s0) == pytest.approx(s1.coeffs[0].conjugate(), abs=1e-15)


def test_inner_product_mismatch(linear_k1, cubic_quarter):
    with pytest.raises(ValueError):
        inner_product(build_state(linear_k1, "bg", 1.0), build_state(cubic_quarter, "bg", 1.0))


@given(
    st.sampled_from(["bg", "p"]),
    st.complex_numbers(max_magnitude=4.0, allow_nan=False, allow_infinity=False),
    st.complex_numbers(max_magnitude=4.0, allow_nan=False, allow_infinity=False),
)
def test_schwarz_bound(family, z1, z2):
    spec = make_spec(2, 1.5)
    s1, s2 = build_state(spec, family, z1), build_state(spec, family, z2)
    assert abs(inner_product(s1, s2)) <= 1 + s1.tail_bound + s2.tail_bound + 1e-14


def test_radius_of_convergence(linear_k1, cubic_quarter):
    assert radius_of_convergence(linear_k1, "bg") == math.inf
    assert radius_of_convergence(make_spec(3, 1.5), "bg") == math.inf
    assert radius_of_convergence(linear_k1, "p") == 1.0
    assert radius_of_convergence(AlgebraSpec.linear(1.0, 2.5), "p") == 2.5
    assert radius_of_convergence(cubic_quarter, "p") == math.inf
    assert radius_ratio(AlgebraSpec.linear(0.6, 2.5), "p", 1e4) == pytest.approx(2.5, rel=1e-2)
    assert radius_ratio(cubic_quarter, "p", 1e4) > 1e6
    assert radius_ratio(cubic_quarter, "bg", 1e4) > 1e6


def test_out_of_disk(linear_k1):
    with pytest.raises(DomainError):
        build_state(linear_k1, "p", 1.0)
    with pytest.raises(DomainError):
        normalization_closed_form(linear_k1, "p", 1.2)


def test_eigendefect_linear(linear_k1):
    s = build_state(linear_k1, "bg", 1.0, tol=1e-14)
    d = lowering_eigendefect(build_rep(linear_k1, s.N + 1), s)
    assert d.minus_defect <= 1e-10
    assert d.plus_defect > 0.1


def test_eigendefect_fiducial(linear_k1):
    s = build_state(linear_k1, "bg", 0)
    assert lowering_eigendefect(build_rep(linear_k1, 4), s).minus_defect == 0.0


def test_eigendefect_needs_larger_rep(linear_k1):
    s = build_state(linear_k1, "bg", 2.0)
    with pytest.raises(ValueError):
        lowering_eigendefect(build_rep(linear_k1, s.N), s)


@pytest.mark.parametrize("p", [1, 2, 3])
@pytest.mark.parametrize("k", [0.6, 1.0, 0.875, 2.0])
def test_eigendefect_bounded_by_tail(p, k):
    spec = AlgebraSpec(p, ALPHAS[p], k)
    for r in (0.3, 1.0, 3.0, 5.0):
        s = build_state(spec, "bg", r * cmath.exp(0.7j))
        d = lowering_eigendefect(build_rep(spec, s.N + 1), s)
        assert d.minus_defect <= max(10 * s.tail_bound, 1e-13)
        assert d.plus_defect > 1e-3


def test_time_evolution(linear_k1):
    s = build_state(linear_k1, "bg", 1.0)
    np.testing.assert_allclose(time_evolve(s, 0.0).coeffs, s.coeffs, atol=1e-15)
    np.testing.assert_allclose(time_evolve(s, 2 * math.pi).coeffs, s.coeffs, atol=1e-12)
    quarter = time_evolve(s, math.pi / 2)
    np.testing.assert_allclose(quarter.coeffs, s.coeffs * (-1j) ** np.arange(s.N + 1), atol=1e-12)


@pytest.mark.parametrize("family", ["bg", "p"])
def test_time_evolution_is_diagonal(cubic_quarter, family):
    s = build_state(cubic_quarter, family, 1.2 + 0.4j)
    phase = 0.37
    evolved = time_evolve(s, phase)
    n = np.arange(s.N + 1)
    np.testing.assert_allclose(evolved.coeffs, s.coeffs * np.exp(-1j * n * phase), atol=1e-12)


def test_custom_family_reproduces_bg(cubic_quarter):
    seq = StructureSequence(cubic_quarter)
    custom = build_state(cubic_quarter, "custom", 1.5, nu=seq.phi)
    bg = build_state(cubic_quarter, "bg", 1.5)
    np.testing.assert_allclose(custom.coeffs, bg.coeffs, atol=1e-14)
    assert Family.parse("CUSTOM") is Family.CUSTOM


def test_custom_family_validation(cubic_quarter):
    with pytest.raises(ValueError):
        build_state(cubic_quarter, "custom", 1.0)
    with pytest.raises(NonPositiveFactorError):
        build_state(cubic_quarter, "custom", 1.0, nu=lambda n: -np.ones_like(n))


def test_cubic_p_state_coefficients(cubic_quarter):
    # sqrt((2k)_n / (n! [chi_n]!)) eta^n with [chi_n]! = 4^n (7/8)_n (15/8)_n
    eta = 0.9
    s = build_state(cubic_quarter, "p", eta)
    raw = np.array([float(mp.sqrt(mp.rf(1.75, n) / (mp.factorial(n) * 4 ** n * mp.rf(0.875, n) * mp.rf(1.875, n))))
                    * eta ** n for n in range(s.N + 1)])
    raw /= math.sqrt(math.fsum(raw ** 2))
    np.testing.assert_allclose(s.coeffs.real, raw, rtol=1e-12)


def test_linear_limit_from_cubic():
    from polysu11.verify import linear_limit_defects

    for k in (0.6, 0.875, 1.5):
        bg, p = linear_limit_defects(k)
        assert bg <= 1e-6 and p <= 1e-6
    # and the distance does shrink with alpha_2, it is not identically small
    spec = AlgebraSpec(2, (1.0, 1e-3), 1.0)
    s = build_state(spec, "bg", 1.5 + 0.5j)
    lin = build_state(AlgebraSpec.linear(1.0), "bg", 1.5 + 0.5j)
    dim = max(s.N, lin.N) + 1
    assert np.max(np.abs(s.padded(dim) - lin.padded(dim))) > 1e-5


def test_states_for_oscillator_family():
    spec = cubic_algebra_spec(OscillatorParams.g_zero(0.4))
    s = build_state(spec, "p", 3.0)
    assert math.fsum(np.abs(s.coeffs) ** 2) == pytest.approx(1.0, abs=1e-12)
