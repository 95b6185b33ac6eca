import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kshcst import core, opsim
from kshcst import rootsys as rs

SPACE = opsim.TruncatedHilbert(16)
S1 = rs.torus(1)


@pytest.fixture(scope="module")
def coeffs_quad():
    from kshcst.complexifier import quadratic
    return opsim.ksh_coefficients(SPACE, S1, quadratic(), core.QuantParams(0, 1.0, 1.0))


@pytest.fixture(scope="module")
def coeffs_quart():
    from kshcst.complexifier import quartic
    return opsim.ksh_coefficients(SPACE, S1, quartic(0.1), core.QuantParams(0, 1.0, 1.0))


def test_space_shape():
    assert SPACE.size == 33
    assert SPACE.labels[0] == -16 and SPACE.labels[-1] == 16
    assert SPACE.interior.sum() == 17
    with pytest.raises(ValueError):
        opsim.TruncatedHilbert(0)


def test_circle_only(quad):
    with pytest.raises(ValueError):
        opsim.ksh_coefficients(SPACE, rs.type_a(1), quad, core.QuantParams())


def test_quadratic_coefficients_are_one(coeffs_quad):
    np.testing.assert_allclose(coeffs_quad, 1.0, atol=1e-13)


def test_quartic_coefficients_symmetric(coeffs_quart):
    np.testing.assert_allclose(coeffs_quart, coeffs_quart[::-1], rtol=1e-13)
    assert not np.allclose(coeffs_quart, 1.0, atol=1e-3)


def test_nu_identity_and_shift(coeffs_quart, coeffs_quad):
    np.testing.assert_array_equal(opsim.nu_matrix(SPACE, 0, coeffs_quart), np.eye(33))
    np.testing.assert_allclose(opsim.nu_matrix(SPACE, 1, coeffs_quad), np.eye(33, k=-1), atol=1e-13)


def test_nu_entries(coeffs_quart):
    nu = opsim.nu_matrix(SPACE, 1, coeffs_quart)
    n = 3
    i = n + 16
    assert nu[i + 1, i] == pytest.approx(coeffs_quart[i + 1] / coeffs_quart[i])
    assert abs(nu[i + 1, i] - 1) > 1e-4


def test_nu_rejects_bad_input(coeffs_quart):
    with pytest.raises(ValueError):
        opsim.nu_matrix(SPACE, 17, coeffs_quart)
    with pytest.raises(ValueError):
        opsim.nu_matrix(SPACE, 1, coeffs_quart[:-1])
    with pytest.raises(ValueError):
        opsim.nu_matrix(SPACE, 1, -coeffs_quart)


def test_star_defect_dichotomy(coeffs_quad, coeffs_quart):
    base = opsim.star_defect(SPACE, 1, coeffs_quad)
    assert base < 1e-12
    quart = opsim.star_defect(SPACE, 1, coeffs_quart)
    assert quart == pytest.approx(0.0161583707319507, rel=1e-8)
    with pytest.raises(ValueError):
        opsim.star_defect(SPACE, 9, coeffs_quart)


def test_star_defect_blind_to_global_scale(coeffs_quad):
    # a constant multiple of a unitary still gives a *-representation
    assert opsim.star_defect(SPACE, 2, 3.0 * coeffs_quad) < 1e-12


def test_u_unitarity_convention(coeffs_quart):
    assert opsim.u_unitarity(SPACE) == 0.0
    scaled = coeffs_quart.copy()
    scaled[16] *= 2
    # a wrong block norm shows up in the coefficients, not in U
    assert opsim.u_unitarity(SPACE) == 0.0
    assert scaled[16] / coeffs_quart[16] == 2.0


def test_covariance_identity_element(coeffs_quart):
    assert opsim.covariance_defect(SPACE, 0.0, 0.0, 3, coeffs_quart) == 0.0


def test_translation_operator_unitary():
    R = opsim.translation_operator(SPACE, 0.3, 0.8)
    np.testing.assert_allclose(R @ R.conj().T, np.eye(33), atol=1e-14)


@settings(max_examples=30, deadline=None)
@given(st.floats(0, 1, exclude_max=True), st.floats(0, 1, exclude_max=True), st.integers(-8, 8))
def test_covariance_property(th1, th2, m):
    rng = np.random.default_rng(abs(m))
    coeffs = np.exp(rng.normal(scale=0.2, size=33))
    assert opsim.covariance_defect(SPACE, th1, th2, m, coeffs) < 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(-4, 4), st.integers(-4, 4))
def test_multiplicativity_property(m1, m2):
    rng = np.random.default_rng(7)
    coeffs = np.exp(rng.normal(scale=0.2, size=33))
    assert opsim.multiplicativity_defect(SPACE, m1, m2, coeffs) < 1e-12
