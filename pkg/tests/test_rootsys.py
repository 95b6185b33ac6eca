import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kshcst import rootsys as rs
from kshcst.errors import NumericRangeError

finite = st.floats(-3.0, 3.0, allow_nan=False)


def test_type_a_roots_have_length_two(su3):
    assert su3.n_positive == 3
    np.testing.assert_allclose((su3.positive_roots**2).sum(axis=1), 2.0, rtol=1e-14)


def test_weyl_group_orders():
    assert rs.type_a(1).weyl_order == 2
    assert rs.type_a(2).weyl_order == 6
    assert rs.type_a(3).weyl_order == 24
    assert rs.torus(3).weyl_order == 1


def test_weyl_matrices_orthogonal_with_parity_signs(su3):
    for m, s in zip(su3.weyl_matrices, su3.weyl_signs):
        np.testing.assert_allclose(m @ m.T, np.eye(2), atol=1e-14)
        assert round(np.linalg.det(m)) == s


def test_fundamental_weights_dual_to_simple_roots(su3):
    pairing = su3.fundamental_weights @ su3.simple_roots.T
    np.testing.assert_allclose(pairing, np.eye(2), atol=1e-14)


def test_weyl_vector_su2(su2):
    np.testing.assert_allclose(np.abs(su2.weyl_vector), [1 / math.sqrt(2)])


@pytest.mark.parametrize("coords,dim", [((0, 0), 1), ((1, 0), 3), ((0, 1), 3), ((1, 1), 8),
                                        ((2, 0), 6), ((3, 0), 10), ((2, 1), 15)])
def test_su3_dimensions(su3, coords, dim):
    assert rs.dim_irrep(su3, coords) == dim


def test_su2_dimension(su2):
    assert [rs.dim_irrep(su2, k) for k in range(5)] == [1, 2, 3, 4, 5]


def test_torus_weights_are_unrestricted(s1):
    assert rs.dim_irrep(s1, -4) == 1
    assert [str(w) for w in rs.enumerate_dominant(s1, 1)] == ["-1", "0", "1"]


def test_non_dominant_weight_rejected(su2):
    with pytest.raises(ValueError):
        rs.weight(su2, -1)
    with pytest.raises(ValueError):
        rs.weight(su2, (1, 2))


def test_enumerate_dominant_counts(su3):
    assert len(rs.enumerate_dominant(su3, 2)) == 9
    assert str(rs.enumerate_dominant(su3, 1)[-1]) == "(1,1)"


@pytest.mark.parametrize("spec,family,rank", [("s1", "torus", 1), ("su2", "A", 1), ("a:3", "A", 3),
                                              ("torus:2", "torus", 2), (" SU2 ", "A", 1)])
def test_parse_group(spec, family, rank):
    g = rs.parse_group(spec)
    assert (g.family, g.rank) == (family, rank)


@pytest.mark.parametrize("spec", ["b:2", "a:x", "su3", "", "a:0"])
def test_parse_group_rejects(spec):
    with pytest.raises(ValueError):
        rs.parse_group(spec)


def test_torus_volume():
    assert rs.torus_volume(rs.torus(2)) == 1.0
    assert rs.torus_volume(rs.type_a(1)) == pytest.approx(1 / (2 * math.pi), rel=1e-15)
    # P(rho) = 1*1*2 for A(2)
    assert rs.torus_volume(rs.type_a(2)) == pytest.approx(2 / (2 * math.pi) ** 3, rel=1e-14)


def _su2_closed(k, x):
    return math.sinh((k + 1) * x) / math.sinh(x) if x != 0 else k + 1.0


@pytest.mark.parametrize("k", [0, 1, 2, 5])
@pytest.mark.parametrize("t", [0.0, 3e-5, 1e-3, 0.3, 2.0, -1.2])
def test_su2_character_closed_form(su2, k, t):
    zeta = np.array([t])
    x = float(su2.positive_roots[0] @ zeta)
    assert float(rs.char_imag_exp(su2, k, zeta)) == pytest.approx(_su2_closed(k, x), rel=1e-10)


def test_circle_character(s1):
    assert float(rs.char_imag_exp(s1, 3, np.array([0.25]))) == pytest.approx(math.exp(-1.5))


def test_character_batch_shape(su3):
    z = np.random.default_rng(1).normal(size=(7, 2))
    assert rs.log_char_imag_exp(su3, (1, 1), z).shape == (7,)
    assert np.ndim(rs.log_char_imag_exp(su3, (1, 1), z[0])) == 0


def test_character_overflow_raises(su2):
    with pytest.raises(NumericRangeError):
        rs.char_imag_exp(su2, 50, np.array([20.0]))


def test_character_wall_matches_interior_limit(su3):
    # a point on the alpha_1 wall, compared against a point a hair inside
    alpha = su3.positive_roots[0]
    perp = su3.positive_roots[2] - (su3.positive_roots[2] @ alpha) / 2 * alpha
    on = 0.4 * perp
    off = on + 1e-3 * alpha
    v_on = float(rs.char_imag_exp(su3, (1, 1), on))
    v_off = float(rs.char_imag_exp(su3, (1, 1), off))
    assert abs(v_on - v_off) / v_on < 1e-5


def test_vandermonde_torus_is_one(s1):
    assert rs.vandermonde_P(s1, np.array([2.0])) == 1.0


def test_eta_series_region(su2):
    a = 1e-5
    Y = np.array([a / math.sqrt(2)])
    assert float(rs.eta(su2, Y)) == pytest.approx(math.sinh(a) / a, rel=1e-15)


def test_eta_large_argument_no_overflow(su2):
    assert np.isfinite(rs.log_eta(su2, np.array([600.0])))


@settings(max_examples=60, deadline=None)
@given(st.tuples(finite, finite), st.integers(0, 2), st.integers(0, 2))
def test_character_weyl_invariant(z, a, b):
    su3 = rs.type_a(2)
    z = np.array(z)
    ref = rs.log_char_imag_exp(su3, (a, b), z)
    for v, _ in rs.weyl_orbit(su3, z):
        assert rs.log_char_imag_exp(su3, (a, b), v) == pytest.approx(ref, rel=1e-8, abs=1e-8)


@settings(max_examples=60, deadline=None)
@given(st.tuples(finite, finite))
def test_alternating_sum_of_p_is_order_times_p(x):
    su3 = rs.type_a(2)
    X = np.array(x)
    alt = sum(s * rs.vandermonde_P(su3, v) for v, s in rs.weyl_orbit(su3, X))
    assert alt == pytest.approx(6 * rs.vandermonde_P(su3, X), rel=1e-9, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(finite)
def test_eta_even_and_at_least_one(y):
    su2 = rs.type_a(1)
    e = float(rs.eta(su2, np.array([y])))
    assert e >= 1.0
    assert e == pytest.approx(float(rs.eta(su2, np.array([-y]))), rel=1e-15)
