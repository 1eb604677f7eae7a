import json

import numpy as np
import pytest
from hypothesis import given

from conftest import torus_points
from ppas.jump import (
    Calibration,
    JumpLocus,
    JumpProblem,
    calibrate,
    grid_slice,
    jump_locus,
    smin,
    theta_residual,
)
from ppas.linsys import random_point_on_line
from ppas.schemes import Double, ZeroScheme
from ppas.surface import SurfaceConfig, TorusPoint, embed, torus_distance

CFG = SurfaceConfig()
P = TorusPoint.from_vector([0.12, 0.81, 0.33, 0.47])
Q = TorusPoint.from_vector([0.64, 0.29, 0.91, 0.05])
PAIR = ZeroScheme.reduced([P, Q])


@given(torus_points, torus_points)
def test_calibration_round_trip(c, off):
    for sign in (1, -1):
        cal = Calibration(sign, off)
        assert cal.from_dual(cal.to_dual(c)) == c


def test_calibration_is_identity():
    cal = calibrate(CFG)
    assert cal.sign == 1
    assert cal.offset == TorusPoint.zero()
    assert json.loads(json.dumps(cal.to_json()))["sign"] == 1


def test_s_vanishes_only_at_the_jump():
    assert smin(PAIR, -(P + Q), CFG) < 1e-10
    assert smin(PAIR, TorusPoint.from_vector([0.3, 0.3, 0.3, 0.3]), CFG) > 1e-3


def test_generic_h0():
    assert JumpProblem(PAIR, 2, CFG).generic_h0 == 2
    assert JumpProblem(ZeroScheme.reduced([P]), 1, CFG).generic_h0 == 0


def test_pair_locus_discover():
    loc = jump_locus(PAIR, 2, CFG)
    assert loc.kind == "finite"
    assert len(loc.points) == 1
    pt, height = loc.points[0]
    assert height == 1
    assert torus_distance(pt, -(P + Q), CFG.tau) < 1e-8


def test_pair_locus_confirm():
    near = -(P + Q) + TorusPoint.from_vector([0.004, -0.003, 0.002, 0.001])
    loc = jump_locus(PAIR, 2, CFG, mode="confirm", candidates=[near])
    assert loc.kind == "finite"
    assert torus_distance(loc.points[0][0], -(P + Q), CFG.tau) < 1e-8
    far = jump_locus(PAIR, 2, CFG, mode="confirm", candidates=[TorusPoint.from_vector([0.5, 0.5, 0.5, 0.5])])
    # a poor candidate either refines onto the true jump or yields nothing; never a spurious point
    assert all(torus_distance(p, -(P + Q), CFG.tau) < 1e-8 for p, _ in far.points)


def test_nonreduced_pair():
    X = ZeroScheme((Double(P, (1.0, 0.3j)),))
    loc = jump_locus(X, 2, CFG)
    assert loc.kind == "finite"
    assert torus_distance(loc.points[0][0], -(P * 2), CFG.tau) < 1e-7


def test_level1_pair_jumps_at_minus_the_lines():
    loc = jump_locus(PAIR, 1, CFG)
    assert loc.kind == "finite" and len(loc.points) == 2
    # the two points sum to -(p + q)
    a, b = (p for p, _ in loc.points)
    assert torus_distance(a + b, -(P + Q), CFG.tau) < 1e-7


def test_level1_single_point_is_a_curve():
    loc = jump_locus(ZeroScheme.reduced([P]), 1, CFG, n_samples=8)
    assert loc.kind == "curve"
    assert loc.curve_witness is not None
    assert torus_distance(loc.curve_witness, -P, CFG.tau) < 1e-6
    for c in loc.curve_samples:
        assert theta_residual(embed(c, CFG.tau) + embed(P, CFG.tau), CFG) < 1e-6


def test_theta_residual_on_and_off_the_divisor():
    rng = np.random.default_rng(9)
    x = random_point_on_line(TorusPoint.zero(), CFG, rng)
    assert theta_residual(embed(x, CFG.tau), CFG) < 1e-10
    assert theta_residual(embed(TorusPoint.from_vector([0.25, 0.1, 0.4, 0.3]), CFG.tau), CFG) > 1e-3


def test_invalid_arguments():
    with pytest.raises(ValueError):
        jump_locus(PAIR, 3, CFG)
    with pytest.raises(ValueError):
        jump_locus(PAIR, 2, CFG, mode="guess")
    with pytest.raises(ValueError):
        grid_slice(PAIR, CFG, res=0)


def test_grid_slice_shape_and_minimum():
    target = -(P + Q)
    c3, c4 = target.vector[2:]
    data = grid_slice(PAIR, CFG, c3=float(c3), c4=float(c4), res=8)
    assert data.shape == (64, 3)
    assert np.all(data[:, :2] >= 0) and np.all(data[:, :2] < 1)
    assert np.all(np.isfinite(data[:, 2]))


def test_locus_json():
    loc = JumpLocus("finite", points=[(P, 1)], generic_h0=2)
    d = json.loads(json.dumps(loc.to_json()))
    assert d["kind"] == "finite" and d["points"][0]["height"] == 1 and d["curve_witness"] is None

