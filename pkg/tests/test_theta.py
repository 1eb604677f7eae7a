import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ppas.surface import DEFAULT_TAU, PeriodMatrix, TorusPoint, embed, two_torsion
from ppas.theta import (
    ZERO_CHAR,
    Characteristic,
    TruncationInsufficient,
    basis_L2,
    basis_L2_tensors,
    directional,
    theta,
    theta_jet,
    theta_tensors,
    theta_value,
)

T = DEFAULT_TAU.matrix

# brute-force lattice sums over |n_i| <= 25 at 30 digits, computed with mpmath
ORACLE = [
    (ZERO_CHAR, (0.1 + 0.2j, 0.3), 1.1282758535706239 - 0.08995006988144577j),
    (ZERO_CHAR, (-0.45 + 0.1j, 0.2 - 0.3j), 0.9247554648463178 + 0.1943265917135505j),
    (Characteristic((0.5, 0.0)), (0.2 + 0.1j, -0.1 + 0.15j), 0.815317082313325 - 0.15270737498258194j),
    (Characteristic((0.5, 0.5), (0.5, 0.0)), (0.05 + 0.02j, 0.1), -0.04398558207252568 - 0.12852460508250124j),
]
# theta[s/2, 0](2z, 2 tau) at z = (0.1+0.05i, -0.2+0.1i), same method
BASIS_ORACLE = np.array([
    0.9997815265778079 - 0.001379588596820078j,
    0.11338355065434198 + 0.19546614407078344j,
    0.35332980036067474 - 0.07704151307887273j,
    0.01275494758108687 + 0.09742095012112102j,
])

box = st.tuples(*[st.floats(-0.5, 0.5)] * 2, *[st.floats(-0.3, 0.3)] * 2).map(
    lambda v: np.array([v[0] + 1j * v[2], v[1] + 1j * v[3]])
)
unit = st.floats(0.0, 1.0, exclude_max=True)
torus_z = st.tuples(unit, unit, unit, unit).map(lambda v: embed(TorusPoint.from_vector(v), DEFAULT_TAU))


@pytest.mark.parametrize("ch,z,expected", ORACLE)
def test_against_brute_force(ch, z, expected):
    assert theta_value(ch, np.array(z), DEFAULT_TAU) == pytest.approx(expected, rel=1e-12, abs=1e-13)


def test_basis_against_brute_force():
    z = np.array([0.1 + 0.05j, -0.2 + 0.1j])
    assert np.allclose(basis_L2(z, DEFAULT_TAU), BASIS_ORACLE, rtol=1e-12, atol=1e-13)


def test_theta_value_object():
    v = theta(ZERO_CHAR, np.array([0.1 + 0.2j, 0.3]), DEFAULT_TAU)
    assert v.value == pytest.approx(ORACLE[0][2], rel=1e-12)


def test_far_points_use_the_lattice_factor():
    z = np.array([0.3 + 0.1j, -0.2 + 0.05j])
    far = z + np.array([2.0, -1.0]) + T @ np.array([3.0, -2.0])
    lf, (t0,) = theta_tensors(ZERO_CHAR, far, DEFAULT_TAU)
    # the reduced value stays O(1); the growth lives in log_factor
    assert abs(t0) < 10
    assert lf.real > 10


def test_truncation_guard():
    small = PeriodMatrix(0.2j, 0.05j, 0.2j)
    with pytest.raises(TruncationInsufficient):
        theta_tensors(ZERO_CHAR, np.zeros(2), small, 2, 4)
    with pytest.raises(ValueError):
        theta_tensors(ZERO_CHAR, np.zeros(2), DEFAULT_TAU, 0, 2)


def test_truncation_converged():
    z = np.array([0.37 + 0.2j, -0.11 + 0.4j])
    assert theta_value(ZERO_CHAR, z, DEFAULT_TAU, 8) == pytest.approx(theta_value(ZERO_CHAR, z, DEFAULT_TAU, 14), rel=1e-13)


def test_batch_shape():
    zs = np.zeros((3, 5, 2), dtype=complex)
    assert theta_value(ZERO_CHAR, zs, DEFAULT_TAU).shape == (3, 5)
    assert basis_L2(zs[0], DEFAULT_TAU).shape == (4, 5)


def test_six_odd_characteristics_vanish_at_origin():
    chars = Characteristic.all()
    odd = [c for c in chars if c.parity == -1]
    assert len(chars) == 16 and len(odd) == 6
    for c in odd:
        assert abs(theta_value(c, np.zeros(2), DEFAULT_TAU)) < 1e-13


def test_theta_divisor_contains_six_two_torsion_points():
    on = [e for e in two_torsion() if abs(theta_value(ZERO_CHAR, embed(e, DEFAULT_TAU), DEFAULT_TAU)) < 1e-10]
    assert len(on) == 6


def test_bad_characteristic_entry():
    with pytest.raises(ValueError):
        Characteristic((0.25, 0.0))


def test_jet_matches_finite_differences():
    z = np.array([0.21 - 0.1j, -0.33 + 0.17j])
    f, g, H = theta_jet(ZERO_CHAR, z, DEFAULT_TAU)
    h = 1e-5
    for k, d in enumerate(np.eye(2)):
        fd = (theta_value(ZERO_CHAR, z + h * d, DEFAULT_TAU) - theta_value(ZERO_CHAR, z - h * d, DEFAULT_TAU)) / (2 * h)
        assert fd == pytest.approx(g[k], abs=1e-8)
        gp = theta_jet(ZERO_CHAR, z + h * d, DEFAULT_TAU)[1]
        gm = theta_jet(ZERO_CHAR, z - h * d, DEFAULT_TAU)[1]
        assert np.allclose((gp - gm) / (2 * h), H[k], atol=1e-7)
    assert np.allclose(H, H.T)


def test_directional_contracts_tensors():
    z = np.array([0.1 + 0.1j, 0.2])
    v, w = np.array([1.0, 2.0j]), np.array([0.5, -1.0])
    _, g, H = theta_jet(ZERO_CHAR, z, DEFAULT_TAU)
    assert directional(ZERO_CHAR, z, DEFAULT_TAU, [v]) == pytest.approx(g @ v)
    assert directional(ZERO_CHAR, z, DEFAULT_TAU, [v, w]) == pytest.approx(v @ H @ w)


def test_basis_derivative_scaling():
    z = np.array([0.12 + 0.03j, -0.07 + 0.2j])
    lf, (t0, t1) = basis_L2_tensors(z, DEFAULT_TAU, 1)
    h = 1e-6
    d = np.array([1.0, 0.0])
    fd = (basis_L2(z + h * d, DEFAULT_TAU) - basis_L2(z - h * d, DEFAULT_TAU)) / (2 * h)
    assert np.allclose(np.exp(lf) * t1[:, 0], fd, atol=1e-7)


@settings(max_examples=40)
@given(torus_z)
def test_parity(z):
    for ch in (ZERO_CHAR, Characteristic((0.5, 0.5), (0.5, 0.0))):
        a, b = theta_value(ch, z, DEFAULT_TAU), theta_value(ch, -z, DEFAULT_TAU)
        assert abs(a - ch.parity * b) <= 1e-10 * max(1.0, abs(a))


@settings(max_examples=40)
@given(box, st.tuples(st.integers(-2, 2), st.integers(-2, 2)), st.tuples(st.integers(-2, 2), st.integers(-2, 2)))
def test_quasi_periodicity(z, m, n):
    m, n = np.array(m, float), np.array(n, float)
    lhs = theta_value(ZERO_CHAR, z + m + T @ n, DEFAULT_TAU)
    rhs = np.exp(-1j * np.pi * n @ T @ n - 2j * np.pi * n @ z) * theta_value(ZERO_CHAR, z, DEFAULT_TAU)
    assert abs(lhs - rhs) <= 1e-10 * abs(rhs)


@settings(max_examples=40)
@given(box, box)
def test_addition_formula(z, x):
    lhs = theta_value(ZERO_CHAR, z + x, DEFAULT_TAU) * theta_value(ZERO_CHAR, z - x, DEFAULT_TAU)
    rhs = basis_L2(z, DEFAULT_TAU) @ basis_L2(x, DEFAULT_TAU)
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))


@settings(max_examples=30)
@given(torus_z)
def test_basis_is_even(z):
    a, b = basis_L2(z, DEFAULT_TAU), basis_L2(-z, DEFAULT_TAU)
    assert np.max(np.abs(a - b)) <= 1e-10 * max(1.0, np.max(np.abs(a)))
