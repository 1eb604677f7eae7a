import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import torus_points
from ppas.schemes import (
    CurvilinearTriple,
    Double,
    InvalidScheme,
    Reduced,
    UnsupportedJet,
    Yd,
    Ye,
    ZeroScheme,
    colength_one_subschemes,
    condition_order,
    conditions,
    scheme_sum,
)
from ppas.surface import DEFAULT_TAU, TorusPoint, embed
from ppas.theta import ZERO_CHAR, theta_jet, theta_value

P = TorusPoint.from_vector([0.1, 0.2, 0.3, 0.4])
Q = TorusPoint.from_vector([0.6, 0.1, 0.9, 0.25])
R = TorusPoint.from_vector([0.35, 0.7, 0.15, 0.8])

complex_dir = st.tuples(*[st.floats(-1, 1)] * 4).filter(lambda v: np.hypot(np.hypot(v[0], v[1]), np.hypot(v[2], v[3])) > 0.1).map(
    lambda v: (complex(v[0], v[1]), complex(v[2], v[3]))
)

ALL_KINDS = [
    Reduced(P),
    Double(P, (1, 2j)),
    CurvilinearTriple(P, (1, 0.5), (0.2j, -0.1)),
    Yd(P, (1, 0), (0.3, 1)),
    Ye(P),
]


@pytest.mark.parametrize("jet", ALL_KINDS, ids=lambda j: type(j).__name__)
def test_condition_count_equals_length(jet):
    X = ZeroScheme((jet, Reduced(Q)))
    assert len(conditions(X)) == X.length == jet.length + 1


@pytest.mark.parametrize("jet", ALL_KINDS, ids=lambda j: type(j).__name__)
def test_json_round_trip(jet, tmp_path):
    X = ZeroScheme((jet, Reduced(Q)))
    assert ZeroScheme.from_json(json.loads(json.dumps(X.to_json()))) == X
    X.save(tmp_path / "x.json")
    assert ZeroScheme.load(tmp_path / "x.json") == X


def test_directions_are_normalised():
    d = Double(P, (3, 4))
    assert np.allclose(d.t, (0.6, 0.8))
    with pytest.raises(InvalidScheme):
        Double(P, (0, 0))


def test_yd_needs_independent_directions():
    with pytest.raises(InvalidScheme):
        Yd(P, (1, 1j), (2, 2j))


def test_shared_support_rejected():
    with pytest.raises(InvalidScheme):
        ZeroScheme((Reduced(P), Double(P, (1, 0))))


def test_length_cap():
    pts = [TorusPoint.from_vector([k / 10, 0, 0, 0]) for k in range(9)]
    with pytest.raises(InvalidScheme):
        ZeroScheme.reduced(pts)


@pytest.mark.parametrize(
    "data",
    [
        {"kind": "reduced"},
        [{"kind": "double", "p": [0, 0, 0, 0]}],
        [{"kind": "reduced", "p": [0, 0, 0]}],
        [{"kind": "double", "p": [0, 0, 0, 0], "t": [[1]]}],
    ],
)
def test_malformed_json(data):
    with pytest.raises(InvalidScheme):
        ZeroScheme.from_json(data)


def test_unknown_kind():
    with pytest.raises(UnsupportedJet):
        ZeroScheme.from_json([{"kind": "fat", "p": [0, 0, 0, 0]}])


def test_load_bad_file(tmp_path):
    path = tmp_path / "x.json"
    path.write_text("[{")
    with pytest.raises(InvalidScheme):
        ZeroScheme.load(path)


def test_condition_order():
    assert condition_order(ZeroScheme.reduced([P, Q])) == 0
    assert condition_order(ZeroScheme((Double(P, (1, 0)),))) == 1
    assert condition_order(ZeroScheme((Ye(P), Reduced(Q)))) == 1
    assert condition_order(ZeroScheme((Yd(P, (1, 0), (0, 1)),))) == 2


def test_scheme_sum_counts_length():
    X = ZeroScheme((Double(P, (1, 0)), Reduced(Q)))
    assert scheme_sum(X) == P * 2 + Q


def test_translate():
    X = ZeroScheme((Double(P, (1, 0)), Reduced(Q)))
    Y = X.translate(R)
    assert Y.points == [P + R, Q + R]
    assert Y.jets[0].t == X.jets[0].t


def test_colength_one_reduced():
    subs = colength_one_subschemes(ZeroScheme.reduced([P, Q, R]))
    assert not subs.one_parameter_family
    assert sorted(len(s) for s in subs.schemes) == [2, 2, 2]
    assert {frozenset(s.points) for s in subs.schemes} == {frozenset((P, Q)), frozenset((Q, R)), frozenset((P, R))}


def test_colength_one_nonreduced():
    subs = colength_one_subschemes(ZeroScheme((CurvilinearTriple(P, (1, 0)), Reduced(Q))))
    assert [s.length for s in subs.schemes] == [3, 3]
    assert isinstance(subs.schemes[0].jets[0], Double)
    subs = colength_one_subschemes(ZeroScheme((Ye(P),)))
    assert subs.one_parameter_family and len(subs.schemes) == 2
    with pytest.raises(InvalidScheme):
        colength_one_subschemes(ZeroScheme.reduced([P]))


def _quadratic_tensors(b, Q_, A):
    """Derivative tensors of x -> b.x + x^T Q x / 2 with x = A^{-1}(z - p), at z = p."""
    Ai = np.linalg.inv(A)
    return [np.array(0j), Ai.T @ b, Ai.T @ Q_ @ Ai]


@settings(max_examples=30)
@given(complex_dir, complex_dir)
def test_yd_annihilates_its_ideal(t_eta, t_eps):
    A = np.array([t_eta, t_eps]).T
    if abs(np.linalg.det(A)) < 1e-3:
        return
    jet = Yd(P, t_eta, t_eps)
    A = np.array([jet.t_eta, jet.t_eps]).T
    # generators eps - eta^2 and eps * eta, in coordinates (eta, eps)
    gens = [(np.array([0, 1.0]), np.diag([-2.0, 0.0])), (np.zeros(2), np.array([[0, 1.0], [1.0, 0]]))]
    for b, Q_ in gens:
        tens = _quadratic_tensors(b, Q_, A)
        for f in jet.functionals():
            assert abs(f.apply(tens)) < 1e-9
    # and eta^2 alone is detected
    tens = _quadratic_tensors(np.zeros(2), np.diag([2.0, 0.0]), A)
    assert abs(jet.functionals()[2].apply(tens)) > 1e-3


@settings(max_examples=25)
@given(complex_dir, complex_dir)
def test_curvilinear_second_condition_is_arc_second_derivative(t, n):
    jet = CurvilinearTriple(P, t, n)
    z0 = embed(P, DEFAULT_TAU)
    t_, n_ = np.array(jet.t), np.array(jet.n)
    f0, g, H = theta_jet(ZERO_CHAR, z0, DEFAULT_TAU)
    val = jet.functionals()[2].apply([np.array(f0), g, H])
    h = 1e-3
    arc = lambda s: theta_value(ZERO_CHAR, z0 + s * t_ + s * s * n_, DEFAULT_TAU)
    fd = (arc(h) - 2 * arc(0.0) + arc(-h)) / h**2
    assert abs(val - fd) <= 1e-4 * max(1.0, abs(val))


@given(st.lists(torus_points, min_size=1, max_size=8, unique=True))
def test_reduced_schemes_have_one_condition_per_point(pts):
    try:
        X = ZeroScheme.reduced(pts)
    except InvalidScheme:
        return  # coincident after fixed-point rounding
    assert len(conditions(X)) == len(pts)
    assert X.is_reduced
